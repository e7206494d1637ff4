use std::collections::BTreeMap;
use std::fmt;

use super::scalar::SymbolicScalar;
use crate::exactlin::Rational;

/// Mode generators: the Virasoro field and the three weight-2 primaries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Gen {
    L,
    X,
    Y,
    U,
}

impl Gen {
    pub fn symbol(self) -> &'static str {
        match self {
            Gen::L => "L",
            Gen::X => "x",
            Gen::Y => "y",
            Gen::U => "u",
        }
    }

    pub fn is_primary(self) -> bool {
        self != Gen::L
    }

    pub const PRIMARIES: [Gen; 3] = [Gen::X, Gen::Y, Gen::U];
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Base {
    Vac,
    X,
    Y,
    U,
}

impl Base {
    pub fn weight(self) -> i64 {
        if self == Base::Vac {
            0
        } else {
            2
        }
    }

    pub fn gen(self) -> Option<Gen> {
        match self {
            Base::Vac => None,
            Base::X => Some(Gen::X),
            Base::Y => Some(Gen::Y),
            Base::U => Some(Gen::U),
        }
    }

    pub fn of(g: Gen) -> Base {
        match g {
            Gen::X => Base::X,
            Gen::Y => Base::Y,
            Gen::U => Base::U,
            Gen::L => panic!("L is not a state"),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gen() {
            None => write!(f, "1"),
            Some(g) => write!(f, "{}", g.symbol()),
        }
    }
}

/// `L(n)` for `gen = L`, otherwise the mode `g_n` of a weight-2 primary.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Mode {
    pub gen: Gen,
    pub n: i64,
}

impl Mode {
    pub fn new(gen: Gen, n: i64) -> Self {
        Mode { gen, n }
    }

    pub fn l(n: i64) -> Self {
        Mode { gen: Gen::L, n }
    }

    /// Weight shift of the mode.
    pub fn degree(self) -> i64 {
        if self.gen == Gen::L {
            -self.n
        } else {
            1 - self.n
        }
    }

    /// Adjoint for the invariant form.
    pub fn adjoint(self) -> Self {
        if self.gen == Gen::L {
            Mode::l(-self.n)
        } else {
            Mode::new(self.gen, 2 - self.n)
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gen == Gen::L {
            write!(f, "L({})", self.n)
        } else {
            write!(f, "{}_{{{}}}", self.gen.symbol(), self.n)
        }
    }
}

/// `modes[0] modes[1] ··· base`, outermost mode first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial {
    pub modes: Vec<Mode>,
    pub base: Base,
}

/// An unevaluated word; same shape as a monomial.
pub type ModeWord = Monomial;

impl Monomial {
    pub fn base(base: Base) -> Self {
        Monomial { modes: Vec::new(), base }
    }

    pub fn new(modes: Vec<Mode>, base: Base) -> Self {
        Monomial { modes, base }
    }

    pub fn weight(&self) -> i64 {
        self.base.weight() + self.modes.iter().map(|m| m.degree()).sum::<i64>()
    }

    /// Splits off the outermost mode.
    pub fn split_outer(&self) -> Option<(Mode, Monomial)> {
        let (first, rest) = self.modes.split_first()?;
        Some((*first, Monomial::new(rest.to_vec(), self.base)))
    }

    pub fn prepend(&self, m: Mode) -> Monomial {
        let mut modes = Vec::with_capacity(self.modes.len() + 1);
        modes.push(m);
        modes.extend_from_slice(&self.modes);
        Monomial::new(modes, self.base)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.modes {
            write!(f, "{m}")?;
        }
        write!(f, "{}", self.base)
    }
}

/// Linear combination of monomials with symbolic coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct State {
    terms: BTreeMap<Monomial, SymbolicScalar>,
}

impl State {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::mono(Monomial::base(Base::Vac))
    }

    pub fn gen(g: Gen) -> Self {
        Self::mono(Monomial::base(Base::of(g)))
    }

    pub fn mono(m: Monomial) -> Self {
        Self::term(m, SymbolicScalar::one())
    }

    pub fn term(m: Monomial, c: SymbolicScalar) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn add_term(&mut self, m: Monomial, c: SymbolicScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &SymbolicScalar) {
        for (m, d) in &other.terms {
            self.add_term(m.clone(), c * d);
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &SymbolicScalar::one());
        out
    }

    pub fn sub(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &SymbolicScalar::int(-1));
        out
    }

    pub fn scale(&self, c: &SymbolicScalar) -> State {
        let mut out = State::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_q(&self, c: &Rational) -> State {
        self.scale(&SymbolicScalar::constant(c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &SymbolicScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> SymbolicScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The common weight, or `None` for the zero state or a mixed one.
    pub fn weight(&self) -> Option<i64> {
        let mut ws = self.terms.keys().map(Monomial::weight);
        let w = ws.next()?;
        ws.all(|v| v == w).then_some(w)
    }

    pub fn map_coefficients(&self, f: impl Fn(&SymbolicScalar) -> SymbolicScalar) -> State {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn substitute(&self, values: &BTreeMap<String, SymbolicScalar>) -> State {
        self.map_coefficients(|c| c.substitute(values))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let single = !cs.trim_start_matches('-').contains(' ');
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, cs),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if body == "1" {
                write!(f, "{m}")?;
            } else if single {
                write!(f, "{body}*{m}")?;
            } else {
                write!(f, "({body})*{m}")?;
            }
        }
        Ok(())
    }
}
