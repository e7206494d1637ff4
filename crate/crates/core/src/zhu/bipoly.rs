use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactlin::{fmt_rational, int, Rational};

/// Polynomial in two commuting variables `x` and `y` over ℚ.
///
/// Keys are `(deg_x, deg_y)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPolynomial {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl BiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn monomial(dx: u32, dy: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(dx, dy, c);
        p
    }

    pub fn add_term(&mut self, dx: u32, dy: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry((dx, dy)) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.coeffs.get(&(dx, dy)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|(a, b)| a + b).max()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.coeffs {
            out.add_term(a, b, c * s);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.coeffs
            .iter()
            .map(|(&(a, b), c)| c * num_traits::pow(x.clone(), a as usize) * num_traits::pow(y.clone(), b as usize))
            .sum()
    }

    pub fn eval_int(&self, x: i64, y: i64) -> Rational {
        self.eval(&int(x), &int(y))
    }

    /// `p(y, x)`.
    pub fn swap_xy(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.coeffs {
            out.add_term(b, a, c.clone());
        }
        out
    }

    /// Terms in graded-lexicographic order: highest total degree first, and
    /// within a degree the higher power of `x` first.
    pub fn graded_terms(&self) -> Vec<((u32, u32), Rational)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|((a1, b1), _), ((a2, b2), _)| (a2 + b2, a2).cmp(&(a1 + b1, a1)));
        v
    }
}

impl fmt::Display for BiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.graded_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (*a == 0 && *b == 0) {
                factors.push(fmt_rational(&mag));
            }
            match a {
                0 => {}
                1 => factors.push("x".to_string()),
                _ => factors.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("y".to_string()),
                _ => factors.push(format!("y^{b}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BiPolynomial {
    type Output = BiPolynomial;

    fn add(self, rhs: &BiPolynomial) -> BiPolynomial {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.coeffs {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Sub for &BiPolynomial {
    type Output = BiPolynomial;

    fn sub(self, rhs: &BiPolynomial) -> BiPolynomial {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.coeffs {
            out.add_term(a, b, -c.clone());
        }
        out
    }
}

impl Mul for &BiPolynomial {
    type Output = BiPolynomial;

    fn mul(self, rhs: &BiPolynomial) -> BiPolynomial {
        let mut out = BiPolynomial::zero();
        for (&(a1, b1), c1) in &self.coeffs {
            for (&(a2, b2), c2) in &rhs.coeffs {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPolynomial {
    type Output = BiPolynomial;

    fn neg(self) -> BiPolynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPolynomial {
            type Output = BiPolynomial;

            fn $m(self, rhs: BiPolynomial) -> BiPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
