//! The nilpotent-case chain: rules for `x, y, u`, the highest weight vector
//! `v = u_{-1}x + a·x_{-3}1 + b·L(-2)x`, and the fusion contradiction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::derive::{derive_products, saturate, Derivation, Saturation};
use super::engine::Engine;
use super::rules::{Rule, RuleKind, RuleSet};
use super::scalar::SymbolicScalar;
use super::state::{Base, Gen, Mode, Monomial, State};
use super::GriessError;
use crate::exactlin::{fmt_rational, int, Matrix, Rational};
use crate::zhu::fusion_dim_generic;

/// `Pre` carries `x_1y = 4ω + αx + u` with `(u,y) = 0`; `Post` is the same
/// algebra after `y` absorbs the `αx` term, so `x_1y = 4ω + u` and `(y,u)`
/// is unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Configuration {
    Pre,
    Post,
}

#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    /// Assert `u_1x` and `u_0x` as rules instead of solving them from the
    /// quadratic relations.
    pub lemma_as_axioms: bool,
    /// Skip the quadratic derivation and pairing saturation entirely.
    pub raw: bool,
    /// Indeterminates that saturation must not solve for.
    pub kept: Vec<String>,
}

fn omega() -> Monomial {
    Monomial::new(vec![Mode::l(-2)], Base::Vac)
}

fn mono(modes: &[Mode], base: Base) -> Monomial {
    Monomial::new(modes.to_vec(), base)
}

fn eval(id: &str, g: Gen, n: i64, h: Gen, value: State, source: &str) -> Rule {
    Rule::new(id, RuleKind::Evaluation { left: g, n, right: h, value }, source)
}

fn pairing(id: &str, g: Gen, h: Gen, v: i64, source: &str) -> Rule {
    Rule::new(id, RuleKind::Pairing { left: g, right: h, value: int(v) }, source)
}

/// Rules of a configuration before any derivation.
pub fn rule_set(cfg: Configuration, opts: &EngineOptions) -> Result<RuleSet, GriessError> {
    let mut rs = RuleSet::new();
    rs.push(Rule::new("R1", RuleKind::PrimaryBracket, "x, y, u are Virasoro primaries of weight 2"))?;
    rs.push(Rule::new("R2", RuleKind::VirasoroBracket, "Virasoro bracket at c = 1"))?;
    rs.push(Rule::new("R3", RuleKind::CommutatorFormula, "Borcherds commutator formula"))?;
    rs.push(Rule::new("R4", RuleKind::HighestWeight, "primaries and vacuum are highest weight vectors"))?;
    let mut x1y = State::term(omega(), SymbolicScalar::int(4));
    x1y.add_term(Monomial::base(Base::U), SymbolicScalar::one());
    if cfg == Configuration::Pre {
        x1y.add_term(Monomial::base(Base::X), SymbolicScalar::var("alpha"));
    }
    let r5 = match cfg {
        Configuration::Pre => "product x·y with unknown alpha",
        Configuration::Post => "product x·y after y absorbs the alpha x term",
    };
    rs.push(eval("R5a", Gen::X, 1, Gen::Y, x1y, r5))?;
    rs.push(eval("R5b", Gen::X, 1, Gen::X, State::zero(), "x is nilpotent: x·x = 0"))?;
    rs.push(eval("R5c", Gen::X, -1, Gen::X, State::zero(), "x is nilpotent: x_{-1}x = 0"))?;
    rs.push(pairing("R5d", Gen::X, Gen::Y, 1, "normalization (x,y) = 1"))?;
    rs.push(pairing("R5e", Gen::X, Gen::U, 0, "u is orthogonal to x"))?;
    if cfg == Configuration::Pre {
        rs.push(pairing("R5f", Gen::U, Gen::Y, 0, "u is orthogonal to y before replacement"))?;
    }
    rs.push(Rule::new("R5g", RuleKind::LowWeight, "V_1 = 0 and V_0 = Q1"))?;
    rs.push(Rule::new(
        "R6a",
        RuleKind::Quadratic { n: 3, on: Gen::Y, solves: (Gen::X, 1, Gen::U) },
        "coefficient of Y(x,z)^2 = 0 lowering y by one",
    ))?;
    rs.push(Rule::new(
        "R6b",
        RuleKind::Quadratic { n: 2, on: Gen::Y, solves: (Gen::X, 0, Gen::U) },
        "coefficient of Y(x,z)^2 = 0 preserving the weight of y",
    ))?;
    rs.push(Rule::new("R7", RuleKind::SkewSymmetry, "skew symmetry"))?;
    rs.push(Rule::new("R8", RuleKind::VacuumCreation, "vacuum axiom"))?;
    rs.push(Rule::new("R9", RuleKind::IterateFormula, "iterate formula for modes of descendants"))?;
    rs.push(Rule::new("R10", RuleKind::Adjunction, "invariant bilinear form"))?;
    if opts.lemma_as_axioms {
        rs.push(eval("A1", Gen::U, 1, Gen::X, State::gen(Gen::X).scale_q(&int(-10)), "asserted u_1x = -10x"))?;
        let l1x = State::mono(mono(&[Mode::l(-1)], Base::X)).scale_q(&int(-5));
        rs.push(eval("A2", Gen::U, 0, Gen::X, l1x, "asserted u_0x = -5x_{-2}1"))?;
    }
    Ok(rs)
}

/// A configured engine with its derivations and saturation record.
pub struct Built {
    pub engine: Engine,
    pub derivations: Vec<Derivation>,
    pub saturation: Saturation,
}

pub fn build_engine(cfg: Configuration, opts: &EngineOptions) -> Result<Built, GriessError> {
    let base = Engine::new(rule_set(cfg, opts)?)?;
    if opts.raw {
        return Ok(Built { engine: base, derivations: Vec::new(), saturation: Saturation::default() });
    }
    let (engine, derivations) = if opts.lemma_as_axioms { (base, Vec::new()) } else { derive_products(&base)? };
    let mut kept: BTreeSet<String> = opts.kept.iter().cloned().collect();
    kept.insert("alpha".into());
    if cfg == Configuration::Post {
        kept.insert("(y,u)".into());
    }
    let (engine, saturation) = saturate(&engine, &kept)?;
    Ok(Built { engine, derivations, saturation })
}

/// `u_{-1}x + a·x_{-3}1 + b·L(-2)x`, normalized.
pub fn v_state(engine: &Engine, a: &SymbolicScalar, b: &SymbolicScalar) -> Result<State, GriessError> {
    let mut v = engine.normalize(&mono(&[Mode::new(Gen::U, -1)], Base::X))?;
    v.add_scaled(&engine.normalize(&mono(&[Mode::new(Gen::X, -3)], Base::Vac))?, a);
    v.add_scaled(&engine.normalize(&mono(&[Mode::l(-2)], Base::X))?, b);
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HwCoefficients {
    pub a: Rational,
    pub b: Rational,
    /// Coefficient of `x_{-2}1 = L(-1)x` in `L(1)v`.
    pub l1_coefficient: SymbolicScalar,
    /// Coefficient of `x` in `L(2)v`.
    pub l2_coefficient: SymbolicScalar,
}

fn only_term(s: &State, m: &Monomial, what: &str) -> Result<SymbolicScalar, GriessError> {
    if s.terms().any(|(t, _)| t != m) {
        return Err(GriessError::InsufficientRules(format!("{what} = {s} is not a multiple of {m}")));
    }
    Ok(s.coefficient(m))
}

/// Solves `L(1)v = L(2)v = 0` for `a` and `b`.
pub fn solve_hw_coefficients(engine: &Engine) -> Result<HwCoefficients, GriessError> {
    let (a, b) = (SymbolicScalar::var("a"), SymbolicScalar::var("b"));
    let v = v_state(engine, &a, &b)?;
    let l1 = only_term(&engine.apply(Mode::l(1), &v)?, &mono(&[Mode::l(-1)], Base::X), "L(1)v")?;
    let l2 = only_term(&engine.apply(Mode::l(2), &v)?, &Monomial::base(Base::X), "L(2)v")?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in [&l1, &l2] {
        let (lin, c) = e.as_affine().ok_or_else(|| GriessError::IndeterminateSurvived(e.to_string()))?;
        if lin.keys().any(|k| k != "a" && k != "b") {
            return Err(GriessError::IndeterminateSurvived(e.to_string()));
        }
        let get = |k: &str| lin.get(k).cloned().unwrap_or_else(Rational::zero);
        rows.push(vec![get("a"), get("b")]);
        rhs.push(-c);
    }
    let m = Matrix::from_rows(rows).expect("2x2");
    let sol = m.solve(&rhs).map_err(|e| GriessError::Inconsistent(format!("highest weight system: {e}")))?;
    Ok(HwCoefficients { a: sol[0].clone(), b: sol[1].clone(), l1_coefficient: l1, l2_coefficient: l2 })
}

/// `(y_3 v, u)` as a polynomial in the given `a`, `b` and any unknown pairing.
pub fn pair_y3v_u_symbolic(engine: &Engine, a: &SymbolicScalar, b: &SymbolicScalar) -> Result<SymbolicScalar, GriessError> {
    let v = v_state(engine, a, b)?;
    let y3v = engine.apply(Mode::new(Gen::Y, 3), &v)?;
    engine.pair(&y3v, &State::gen(Gen::U))
}

/// `(y_3 v, u)` at the solved `a`, `b`; every indeterminate must cancel.
pub fn pair_y3v_u(engine: &Engine) -> Result<Rational, GriessError> {
    let hw = solve_hw_coefficients(engine)?;
    let r = pair_y3v_u_symbolic(engine, &hw.a.clone().into(), &hw.b.clone().into())?;
    r.as_constant().ok_or_else(|| GriessError::IndeterminateSurvived(r.to_string()))
}

/// Whether `x_i v = 0` for `0 ≤ i ≤ i_max`.
pub fn check_xiv_zero(engine: &Engine, i_max: i64) -> Result<bool, GriessError> {
    let hw = solve_hw_coefficients(engine)?;
    let v = v_state(engine, &hw.a.into(), &hw.b.into())?;
    for i in 0..=i_max {
        if !engine.apply(Mode::new(Gen::X, i), &v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(x_1x_1 + 2Σ_{i≥1} x_{1-i}x_{1+i}) y`.
pub fn lemma54_chain(engine: &Engine) -> Result<State, GriessError> {
    let y = State::gen(Gen::Y);
    let mut out = engine.apply_modes(&[Mode::new(Gen::X, 1), Mode::new(Gen::X, 1)], &y)?;
    for i in 1..=3 {
        let t = engine.apply_modes(&[Mode::new(Gen::X, 1 - i), Mode::new(Gen::X, 1 + i)], &y)?;
        out.add_scaled(&t, &SymbolicScalar::int(2));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ContradictionEstablished,
    NotEstablished,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ContradictionEstablished => "contradiction-established",
            Verdict::NotEstablished => "not-established",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FusionCheck {
    pub n: u64,
    pub k: u64,
    pub dim: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContradictionReport {
    pub a: Rational,
    pub b: Rational,
    pub y3v_u: Rational,
    pub v_nonzero: bool,
    pub xiv_zero: bool,
    pub x_weight: u64,
    pub v_weight: u64,
    pub fusion_checks: Vec<FusionCheck>,
    pub verdict: Verdict,
}

impl fmt::Display for ContradictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a = {}, b = {}", fmt_rational(&self.a), fmt_rational(&self.b))?;
        writeln!(f, "(y_3 v, u) = {} so v != 0: {}", fmt_rational(&self.y3v_u), self.v_nonzero)?;
        writeln!(f, "x_i v = 0 for i >= 0: {}", self.xiv_zero)?;
        writeln!(f, "x generates L(1,{}), v generates L(1,{})", self.x_weight, self.v_weight)?;
        for c in &self.fusion_checks {
            writeln!(f, "fusion L(1,{}) x L(1,{}) -> L(1,{}): {}", self.v_weight, self.x_weight, c.k, c.dim)?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

pub fn contradiction_report() -> Result<ContradictionReport, GriessError> {
    let built = build_engine(Configuration::Post, &EngineOptions::default())?;
    let engine = &built.engine;
    let hw = solve_hw_coefficients(engine)?;
    let y3v_u = pair_y3v_u(engine)?;
    let xiv_zero = check_xiv_zero(engine, 6)?;
    let (x_weight, v_weight) = (2u64, 4u64);
    let mut fusion_checks = Vec::new();
    for n in 1..=10u64 {
        let k = n + 5;
        let dim = fusion_dim_generic(2, x_weight, k).map_err(|e| GriessError::Derivation(e.to_string()))?;
        fusion_checks.push(FusionCheck { n, k, dim });
    }
    let v_nonzero = !y3v_u.is_zero();
    let verdict = if v_nonzero && xiv_zero && fusion_checks.iter().all(|c| c.dim == 0) {
        Verdict::ContradictionEstablished
    } else {
        Verdict::NotEstablished
    };
    Ok(ContradictionReport { a: hw.a, b: hw.b, y3v_u, v_nonzero, xiv_zero, x_weight, v_weight, fusion_checks, verdict })
}

/// Values of every symbol the saturation solved, for audit output.
pub fn solved_pairings(sat: &Saturation) -> BTreeMap<String, String> {
    sat.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}
