//! Normal ordering and pairing for the weight-2 primaries `x, y, u`.
//!
//! Normal monomials put Virasoro creation modes leftmost in PBW order,
//! followed by primary modes ordered by `(index, generator)` from the outside
//! in. Products `g_n h` that no rule evaluates remain as opaque monomials.
//! Commutators of primary modes are only used when every `g_j h` they need
//! can itself be written down; otherwise the word is left as it stands.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};

use super::rules::{RuleKind, RuleSet};
use super::scalar::SymbolicScalar;
use super::state::{Base, Gen, Mode, Monomial, State};
use super::GriessError;
use crate::exactlin::{int, Rational};

pub const WEIGHT_CAP: i64 = 6;
pub const DEFAULT_FUEL: u64 = 2_000_000;

/// `n(n-1)···(n-j+1)/j!` for any integer `n`.
pub fn binom(n: i64, j: i64) -> Rational {
    if j < 0 {
        return Rational::zero();
    }
    let mut c = Rational::one();
    for t in 0..j {
        c = c * int(n - t) / int(t + 1);
    }
    c
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn q(c: Rational) -> SymbolicScalar {
    SymbolicScalar::constant(c)
}

#[derive(Clone, Copy, Debug, Default)]
struct Flags {
    primary_bracket: bool,
    virasoro: bool,
    commutator: bool,
    highest_weight: bool,
    skew: bool,
    vacuum: bool,
    low_weight: bool,
    iterate: bool,
    adjunction: bool,
}

pub struct Engine {
    rules: RuleSet,
    ope: HashMap<(Gen, i64, Gen), State>,
    pairings: HashMap<(Gen, Gen), Rational>,
    values: BTreeMap<String, SymbolicScalar>,
    flags: Flags,
    weight_cap: i64,
    fuel_limit: u64,
    fuel: Cell<u64>,
    depth: Cell<usize>,
    breaks: Cell<u64>,
    apply_memo: RefCell<HashMap<(Mode, Monomial), State>>,
    pair_memo: RefCell<HashMap<(Monomial, Monomial), SymbolicScalar>>,
    pair_stack: RefCell<HashSet<(Monomial, Monomial)>>,
    comm_stack: RefCell<HashSet<(Mode, Mode, Monomial)>>,
}

fn pair_key(g: Gen, h: Gen) -> (Gen, Gen) {
    if g <= h {
        (g, h)
    } else {
        (h, g)
    }
}

/// Name of the indeterminate `(g,h)`.
pub fn pairing_symbol(g: Gen, h: Gen) -> String {
    let (a, b) = pair_key(g, h);
    format!("({},{})", a.symbol(), b.symbol())
}

/// Name of the symmetric trilinear form `(g_1 h, k)`.
pub fn trilinear_symbol(g: Gen, h: Gen, k: Gen) -> String {
    let mut v = [g, h, k];
    v.sort();
    format!("<{},{},{}>", v[0].symbol(), v[1].symbol(), v[2].symbol())
}

fn single_product(m: &Monomial) -> Option<(Gen, Gen)> {
    match (m.modes.as_slice(), m.base.gen()) {
        ([Mode { gen, n: 1 }], Some(h)) if gen.is_primary() => Some((*gen, h)),
        _ => None,
    }
}

impl Engine {
    pub fn new(rules: RuleSet) -> Result<Self, GriessError> {
        rules.validate()?;
        let mut flags = Flags::default();
        let mut ope = HashMap::new();
        let mut pairings = HashMap::new();
        for r in rules.rules() {
            match &r.kind {
                RuleKind::PrimaryBracket => flags.primary_bracket = true,
                RuleKind::VirasoroBracket => flags.virasoro = true,
                RuleKind::CommutatorFormula => flags.commutator = true,
                RuleKind::HighestWeight => flags.highest_weight = true,
                RuleKind::SkewSymmetry => flags.skew = true,
                RuleKind::VacuumCreation => flags.vacuum = true,
                RuleKind::LowWeight => flags.low_weight = true,
                RuleKind::IterateFormula => flags.iterate = true,
                RuleKind::Adjunction => flags.adjunction = true,
                RuleKind::Evaluation { left, n, right, value } => {
                    ope.insert((*left, *n, *right), value.clone());
                }
                RuleKind::Pairing { left, right, value } => {
                    pairings.insert(pair_key(*left, *right), value.clone());
                }
                RuleKind::Quadratic { .. } => {}
            }
        }
        Ok(Engine {
            rules,
            ope,
            pairings,
            values: BTreeMap::new(),
            flags,
            weight_cap: WEIGHT_CAP,
            fuel_limit: DEFAULT_FUEL,
            fuel: Cell::new(DEFAULT_FUEL),
            depth: Cell::new(0),
            breaks: Cell::new(0),
            apply_memo: RefCell::default(),
            pair_memo: RefCell::default(),
            pair_stack: RefCell::default(),
            comm_stack: RefCell::default(),
        })
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn values(&self) -> &BTreeMap<String, SymbolicScalar> {
        &self.values
    }

    /// The explicitly known value of `g_n h`, if any.
    pub fn evaluation(&self, g: Gen, n: i64, h: Gen) -> Option<&State> {
        self.ope.get(&(g, n, h))
    }

    fn rebuilt(&self, rules: RuleSet, values: BTreeMap<String, SymbolicScalar>) -> Self {
        let mut e = Engine::new(rules).expect("rules were validated before");
        e.values = values;
        e.weight_cap = self.weight_cap;
        e.fuel_limit = self.fuel_limit;
        e
    }

    /// A fresh engine that substitutes `values` for the named indeterminates.
    pub fn with_values(&self, values: BTreeMap<String, SymbolicScalar>) -> Self {
        let mut all = self.values.clone();
        all.extend(values);
        self.rebuilt(self.rules.clone(), all)
    }

    /// A fresh engine with an extra rule; values carry over.
    pub fn with_rule(&self, rule: super::rules::Rule) -> Result<Self, GriessError> {
        let rules = self.rules.clone().with(rule)?;
        Ok(self.rebuilt(rules, self.values.clone()))
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel_limit = fuel;
        self
    }

    fn entry<T>(&self, f: impl FnOnce() -> Result<T, GriessError>) -> Result<T, GriessError> {
        if self.depth.get() == 0 {
            self.fuel.set(self.fuel_limit);
        }
        self.depth.set(self.depth.get() + 1);
        let r = f();
        self.depth.set(self.depth.get() - 1);
        r
    }

    fn tick(&self) -> Result<(), GriessError> {
        let f = self.fuel.get();
        if f == 0 {
            return Err(GriessError::FuelExhausted);
        }
        self.fuel.set(f - 1);
        Ok(())
    }

    fn symbol(&self, name: &str) -> SymbolicScalar {
        self.values.get(name).cloned().unwrap_or_else(|| SymbolicScalar::var(name))
    }

    pub fn base_pairing(&self, g: Gen, h: Gen) -> SymbolicScalar {
        match self.pairings.get(&pair_key(g, h)) {
            Some(v) => q(v.clone()),
            None => self.symbol(&pairing_symbol(g, h)),
        }
    }

    fn insufficient(what: String) -> GriessError {
        GriessError::InsufficientRules(what)
    }

    // ---- normalization -------------------------------------------------

    /// Evaluates a word innermost mode first.
    pub fn normalize(&self, w: &Monomial) -> Result<State, GriessError> {
        self.entry(|| {
            let mut s = State::mono(Monomial::base(w.base));
            for m in w.modes.iter().rev() {
                s = self.apply_inner(*m, &s)?;
            }
            Ok(s)
        })
    }

    /// Normalizes and rejects results that still hold a stuck lowering mode.
    pub fn normalize_strict(&self, w: &Monomial) -> Result<State, GriessError> {
        let s = self.normalize(w)?;
        self.check_normal(&s)?;
        Ok(s)
    }

    pub fn check_normal(&self, s: &State) -> Result<(), GriessError> {
        for (m, _) in s.terms() {
            let stuck = m.modes.iter().any(|md| if md.gen == Gen::L { md.n >= 0 } else { md.n >= 2 });
            if stuck {
                return Err(Self::insufficient(format!("no rule reduces {m}")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, mode: Mode, s: &State) -> Result<State, GriessError> {
        self.entry(|| self.apply_inner(mode, s))
    }

    pub fn apply_modes(&self, modes: &[Mode], s: &State) -> Result<State, GriessError> {
        self.entry(|| {
            let mut s = s.clone();
            for m in modes.iter().rev() {
                s = self.apply_inner(*m, &s)?;
            }
            Ok(s)
        })
    }

    fn apply_inner(&self, mode: Mode, s: &State) -> Result<State, GriessError> {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            let r = self.apply_mono(mode, m)?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    fn apply_mono(&self, mode: Mode, mono: &Monomial) -> Result<State, GriessError> {
        self.tick()?;
        let w = mono.weight() + mode.degree();
        if w < 0 {
            return Ok(State::zero());
        }
        if w > self.weight_cap {
            return Err(GriessError::WeightCap(w));
        }
        let key = (mode, mono.clone());
        if let Some(r) = self.apply_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let before = self.breaks.get();
        let r = if mode.gen == Gen::L { self.apply_l(mode.n, mono)? } else { self.apply_primary(mode, mono)? };
        if self.breaks.get() == before {
            self.apply_memo.borrow_mut().insert(key, r.clone());
        }
        Ok(r)
    }

    /// `mode · mono` as a new monomial, after the low-weight rules.
    fn prepend(&self, mode: Mode, mono: &Monomial) -> Result<State, GriessError> {
        let m = mono.prepend(mode);
        if self.flags.low_weight {
            match m.weight() {
                1 => return Ok(State::zero()),
                0 => {
                    let vac = Monomial::base(Base::Vac);
                    let c = self.pair_mono(&vac, &m)?;
                    return Ok(State::term(vac, c));
                }
                _ => {}
            }
        }
        Ok(State::mono(m))
    }

    fn l_bracket_on(&self, n: i64, outer: Mode, rest: &Monomial) -> Result<State, GriessError> {
        if outer.gen == Gen::L {
            if !self.flags.virasoro {
                return Err(Self::insufficient(format!("[L({n}), {outer}]")));
            }
            let m = outer.n;
            let mut r = self.apply_mono(Mode::l(n + m), rest)?.scale_q(&int(n - m));
            if n + m == 0 {
                r.add_term(rest.clone(), q(int(n * n * n - n) / int(12)));
            }
            Ok(r)
        } else {
            if !self.flags.primary_bracket {
                return Err(Self::insufficient(format!("[L({n}), {outer}]")));
            }
            Ok(self.apply_mono(Mode::new(outer.gen, n + outer.n), rest)?.scale_q(&int(n - outer.n + 1)))
        }
    }

    fn apply_l(&self, n: i64, mono: &Monomial) -> Result<State, GriessError> {
        if n == 0 {
            return Ok(State::mono(mono.clone()).scale_q(&int(mono.weight())));
        }
        let Some((outer, rest)) = mono.split_outer() else {
            let killed = match mono.base {
                Base::Vac => n >= -1,
                _ => n >= 1,
            };
            if killed {
                if !self.flags.highest_weight {
                    return Err(Self::insufficient(format!("L({n}){}", mono.base)));
                }
                return Ok(State::zero());
            }
            return self.prepend(Mode::l(n), mono);
        };
        if n > 0 {
            let inner = self.apply_mono(Mode::l(n), &rest)?;
            let mut r = self.apply_inner(outer, &inner)?;
            r = r.add(&self.l_bracket_on(n, outer, &rest)?);
            return Ok(r);
        }
        if outer.gen != Gen::L || n <= outer.n {
            return self.prepend(Mode::l(n), mono);
        }
        // PBW swap: L(n)L(m) = L(m)L(n) + (n-m)L(n+m).
        let inner = self.apply_mono(Mode::l(n), &rest)?;
        let mut r = self.apply_inner(outer, &inner)?;
        r = r.add(&self.l_bracket_on(n, outer, &rest)?);
        Ok(r)
    }

    fn apply_primary(&self, mode: Mode, mono: &Monomial) -> Result<State, GriessError> {
        let Some((outer, rest)) = mono.split_outer() else {
            return self.apply_to_base(mode, mono.base);
        };
        if outer.gen == Gen::L {
            if !self.flags.primary_bracket {
                return Err(Self::insufficient(format!("[{mode}, {outer}]")));
            }
            // g_n L(m) = L(m) g_n - (m-n+1) g_{m+n}.
            let inner = self.apply_mono(mode, &rest)?;
            let mut r = self.apply_inner(outer, &inner)?;
            let corr = self.apply_mono(Mode::new(mode.gen, mode.n + outer.n), &rest)?;
            r.add_scaled(&corr, &q(int(-(outer.n - mode.n + 1))));
            return Ok(r);
        }
        if outer == mode {
            return self.prepend(mode, mono);
        }
        if mode.n >= 2 {
            return match self.commutator_on(mode, outer, &rest) {
                Ok(c) => {
                    let inner = self.apply_mono(mode, &rest)?;
                    Ok(self.apply_inner(outer, &inner)?.add(&c))
                }
                Err(GriessError::InsufficientRules(_)) => {
                    self.breaks.set(self.breaks.get() + 1);
                    self.prepend(mode, mono)
                }
                Err(e) => Err(e),
            };
        }
        let inner = self.apply_mono(mode, &rest)?;
        let opaque = rest.prepend(mode);
        let irreducible = inner.len() == 1 && inner.coefficient(&opaque) == SymbolicScalar::one();
        if irreducible && (mode.n, mode.gen) <= (outer.n, outer.gen) {
            return self.prepend(mode, mono);
        }
        let comm = match self.commutator_on(mode, outer, &rest) {
            Ok(c) => c,
            Err(GriessError::InsufficientRules(_)) => {
                self.breaks.set(self.breaks.get() + 1);
                return self.prepend(mode, mono);
            }
            Err(e) => return Err(e),
        };
        let swapped = if irreducible { self.prepend(outer, &opaque)? } else { self.apply_inner(outer, &inner)? };
        Ok(swapped.add(&comm))
    }

    fn apply_to_base(&self, mode: Mode, base: Base) -> Result<State, GriessError> {
        let (g, n) = (mode.gen, mode.n);
        let Some(h) = base.gen() else {
            if n >= 0 {
                return Ok(State::zero());
            }
            if !self.flags.vacuum {
                return self.prepend(mode, &Monomial::base(base));
            }
            let k = -n - 1;
            let mut s = State::gen(g);
            for _ in 0..k {
                s = self.apply_inner(Mode::l(-1), &s)?;
            }
            return Ok(s.scale_q(&(Rational::one() / factorial(k))));
        };
        if n >= 4 {
            return Ok(State::zero());
        }
        if n == 3 {
            return Ok(State::term(Monomial::base(Base::Vac), self.base_pairing(g, h)));
        }
        if n == 2 && self.flags.low_weight {
            return Ok(State::zero());
        }
        if let Some(v) = self.ope.get(&(g, n, h)) {
            return Ok(v.clone());
        }
        let known = |m: i64| m >= 2 || self.ope.contains_key(&(h, m, g));
        if self.flags.skew && g < h && (n..=3).all(known) {
            let mut out = State::zero();
            for j in 0..=(3 - n) {
                let mut s = self.apply_to_base(Mode::new(h, n + j), Base::of(g))?;
                for _ in 0..j {
                    s = self.apply_inner(Mode::l(-1), &s)?;
                }
                out.add_scaled(&s, &q(int(sign(n + j + 1)) / factorial(j)));
            }
            return Ok(out);
        }
        if self.flags.skew && g > h {
            // g_n h = Σ_j (-1)^{n+j+1} L(-1)^j/j! h_{n+j} g
            let mut out = State::zero();
            for j in 0..=(3 - n) {
                let mut s = self.apply_to_base(Mode::new(h, n + j), Base::of(g))?;
                for _ in 0..j {
                    s = self.apply_inner(Mode::l(-1), &s)?;
                }
                out.add_scaled(&s, &q(int(sign(n + j + 1)) / factorial(j)));
            }
            return Ok(out);
        }
        if self.flags.skew && g == h && n.rem_euclid(2) == 0 {
            // g_n g = ½ Σ_{j≥1} (-1)^{n+j+1} L(-1)^j/j! g_{n+j} g
            let mut out = State::zero();
            for j in 1..=(3 - n) {
                let mut s = self.apply_to_base(Mode::new(g, n + j), base)?;
                for _ in 0..j {
                    s = self.apply_inner(Mode::l(-1), &s)?;
                }
                out.add_scaled(&s, &q(int(sign(n + j + 1)) / factorial(j) / int(2)));
            }
            return Ok(out);
        }
        self.prepend(mode, &Monomial::base(base))
    }

    /// `[g_n, h_m] w` from the commutator formula.
    fn commutator_on(&self, a: Mode, b: Mode, w: &Monomial) -> Result<State, GriessError> {
        if !self.flags.commutator {
            return Err(Self::insufficient(format!("[{a}, {b}]")));
        }
        let key = (a, b, w.clone());
        if !self.comm_stack.borrow_mut().insert(key.clone()) {
            return Err(Self::insufficient(format!("[{a}, {b}] on {w} needs itself")));
        }
        let r = (|| {
            let mut out = State::zero();
            let target = State::mono(w.clone());
            for j in 0..=3 {
                let c = binom(a.n, j);
                if c.is_zero() {
                    continue;
                }
                let prod = self.apply_to_base(Mode::new(a.gen, j), Base::of(b.gen))?;
                if prod.is_zero() {
                    continue;
                }
                let t = self.state_mode(&prod, a.n + b.n - j, &target)?;
                out.add_scaled(&t, &q(c));
            }
            Ok(out)
        })();
        self.comm_stack.borrow_mut().remove(&key);
        r
    }

    /// `s_k t` for a state `s` whose vertex operator is expanded by the
    /// vacuum, `L(-1)`, Virasoro-descendant and iterate rules.
    pub fn state_mode(&self, s: &State, k: i64, t: &State) -> Result<State, GriessError> {
        self.entry(|| {
            let mut out = State::zero();
            for (ms, cs) in s.terms() {
                for (mt, ct) in t.terms() {
                    let r = self.mono_mode(ms, k, mt)?;
                    out.add_scaled(&r, &(cs * ct));
                }
            }
            Ok(out)
        })
    }

    fn mono_mode(&self, s: &Monomial, k: i64, w: &Monomial) -> Result<State, GriessError> {
        self.tick()?;
        if w.weight() + s.weight() - k - 1 < 0 {
            return Ok(State::zero());
        }
        let Some((outer, rest)) = s.split_outer() else {
            return match s.base.gen() {
                None => Ok(if k == -1 { State::mono(w.clone()) } else { State::zero() }),
                Some(g) => self.apply_mono(Mode::new(g, k), w),
            };
        };
        if outer.gen == Gen::L && outer.n == -1 {
            return Ok(self.mono_mode(&rest, k - 1, w)?.scale_q(&int(-k)));
        }
        if outer.gen == Gen::L && outer.n <= -2 && rest == Monomial::base(Base::Vac) {
            let j = -outer.n - 2;
            let c = int(sign(j)) * binom(k, j);
            return Ok(self.apply_mono(Mode::l(k - j - 1), w)?.scale_q(&c));
        }
        if !self.flags.iterate {
            return Err(Self::insufficient(format!("modes of {s}")));
        }
        // (a_p b)_k = Σ_i (-1)^i C(p,i) [a_{p-i} b_{k+i} - (-1)^p b_{p+k-i} a_i]
        let (p, field): (i64, Box<dyn Fn(i64) -> Mode>) = if outer.gen == Gen::L {
            (outer.n + 1, Box::new(|i| Mode::l(i - 1)))
        } else {
            let g = outer.gen;
            (outer.n, Box::new(move |i| Mode::new(g, i)))
        };
        let mut bound = (w.weight() + rest.weight() - k - 1).max(w.weight() + 1);
        if p >= 0 {
            bound = bound.min(p);
        }
        let mut out = State::zero();
        let rest_state = State::mono(rest.clone());
        for i in 0..=bound {
            let c = int(sign(i)) * binom(p, i);
            if c.is_zero() {
                continue;
            }
            let first = self.mono_mode(&rest, k + i, w)?;
            let first = self.apply_inner(field(p - i), &first)?;
            let ai_w = self.apply_mono(field(i), w)?;
            let second = self.state_mode(&rest_state, p + k - i, &ai_w)?;
            let mut term = first;
            term.add_scaled(&second, &q(int(-sign(p))));
            out.add_scaled(&term, &q(c));
        }
        Ok(out)
    }

    // ---- pairing -------------------------------------------------------

    pub fn pair(&self, a: &State, b: &State) -> Result<SymbolicScalar, GriessError> {
        self.entry(|| {
            let mut out = SymbolicScalar::zero();
            for (ma, ca) in a.terms() {
                for (mb, cb) in b.terms() {
                    let p = self.pair_mono(ma, mb)?;
                    out = &out + &(&(ca * cb) * &p);
                }
            }
            Ok(out)
        })
    }

    fn cycle_symbol(&self, a: &Monomial, b: &Monomial) -> SymbolicScalar {
        for (x, y) in [(a, b), (b, a)] {
            if let (Some((g, h)), Some(k)) = (single_product(x), y.base.gen()) {
                if y.modes.is_empty() {
                    return self.symbol(&trilinear_symbol(g, h, k));
                }
            }
        }
        let (sa, sb) = (a.to_string(), b.to_string());
        let name = if sa <= sb { format!("({sa},{sb})") } else { format!("({sb},{sa})") };
        self.symbol(&name)
    }

    fn pair_mono(&self, a: &Monomial, b: &Monomial) -> Result<SymbolicScalar, GriessError> {
        self.tick()?;
        if a.weight() != b.weight() {
            return Ok(SymbolicScalar::zero());
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.pair_memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        if !self.pair_stack.borrow_mut().insert(key.clone()) {
            self.breaks.set(self.breaks.get() + 1);
            return Ok(self.cycle_symbol(a, b));
        }
        let before = self.breaks.get();
        let r = self.pair_mono_raw(a, b);
        self.pair_stack.borrow_mut().remove(&key);
        let r = r?;
        if self.breaks.get() == before {
            self.pair_memo.borrow_mut().insert(key, r.clone());
        }
        Ok(r)
    }

    fn pair_mono_raw(&self, a: &Monomial, b: &Monomial) -> Result<SymbolicScalar, GriessError> {
        let moved = if let Some((o, rest)) = a.split_outer() {
            Some((rest, o, b, true))
        } else {
            b.split_outer().map(|(o, rest)| (rest, o, a, false))
        };
        let Some((rest, o, other, left)) = moved else {
            return Ok(match (a.base.gen(), b.base.gen()) {
                (None, None) => SymbolicScalar::one(),
                (Some(g), Some(h)) => self.base_pairing(g, h),
                _ => SymbolicScalar::zero(),
            });
        };
        if !self.flags.adjunction {
            return Err(Self::insufficient("adjunction".into()));
        }
        let t = self.apply_mono(o.adjoint(), other)?;
        let mut out = SymbolicScalar::zero();
        for (mt, ct) in t.terms() {
            let p = if left { self.pair_mono(&rest, mt)? } else { self.pair_mono(mt, &rest)? };
            out = &out + &(ct * &p);
        }
        Ok(out)
    }
}

fn factorial(k: i64) -> Rational {
    (1..=k).fold(Rational::one(), |acc, t| acc * int(t))
}
