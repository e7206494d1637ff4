use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactlin::{fmt_rational, Rational};

/// Monomial: variables with positive exponents, sorted by name.
type Key = Vec<(String, u32)>;

/// Polynomial over ℚ in named indeterminates.
///
/// Names are opaque strings such as `a`, `alpha`, `(y,u)`; zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct SymbolicScalar {
    terms: BTreeMap<Key, Rational>,
}

fn mul_keys(a: &Key, b: &Key) -> Key {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl SymbolicScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(Vec::new(), c);
        s
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut s = Self::zero();
        s.add_term(vec![(name.to_string(), 1)], Rational::one());
        s
    }

    fn add_term(&mut self, k: Key, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when no indeterminate occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|k| k.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.terms.keys().any(|k| k.iter().any(|(v, _)| v == name))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    /// Replaces each listed variable by its polynomial value.
    pub fn substitute(&self, values: &BTreeMap<String, SymbolicScalar>) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (v, e) in k {
                let factor = match values.get(v) {
                    Some(p) => p.clone(),
                    None => Self::var(v),
                };
                for _ in 0..*e {
                    term = &term * &factor;
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `(coefficients, constant)` when the polynomial is affine in the variables
    /// with rational coefficients.
    pub fn as_affine(&self) -> Option<(BTreeMap<String, Rational>, Rational)> {
        let mut lin = BTreeMap::new();
        let mut constant = Rational::zero();
        for (k, c) in &self.terms {
            match k.as_slice() {
                [] => constant = c.clone(),
                [(v, 1)] => {
                    lin.insert(v.clone(), c.clone());
                }
                _ => return None,
            }
        }
        Some((lin, constant))
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Key, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().map(|(_, e)| e).sum();
            let db: u32 = b.iter().map(|(_, e)| e).sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        for (i, (k, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || k.is_empty() {
                factors.push(fmt_rational(&mag));
            }
            for (v, e) in k {
                factors.push(if *e == 1 { v.clone() } else { format!("{v}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &SymbolicScalar {
    type Output = SymbolicScalar;

    fn add(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymbolicScalar {
    type Output = SymbolicScalar;

    fn sub(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        self + &(-rhs)
    }
}

impl Mul for &SymbolicScalar {
    type Output = SymbolicScalar;

    fn mul(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut out = SymbolicScalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(mul_keys(ka, kb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SymbolicScalar {
    type Output = SymbolicScalar;

    fn neg(self) -> SymbolicScalar {
        self.scale(&-Rational::one())
    }
}

impl From<Rational> for SymbolicScalar {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}
