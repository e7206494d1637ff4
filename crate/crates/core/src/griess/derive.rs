//! Rules obtained from other rules: products solved out of the quadratic
//! relations, and pairing values forced by agreement of evaluation routes.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::engine::Engine;
use super::rules::{Rule, RuleKind};
use super::scalar::SymbolicScalar;
use super::state::{Base, Gen, Mode, Monomial, State};
use super::GriessError;
use crate::exactlin::{Matrix, Rational};

/// `(x_{-1}x)_n w`, expanded by the iterate formula.
pub fn quadratic_instance(engine: &Engine, n: i64, on: Gen) -> Result<State, GriessError> {
    let square = Monomial::new(vec![Mode::new(Gen::X, -1)], Base::X);
    engine.state_mode(&State::mono(square), n, &State::gen(on))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub rule_id: String,
    pub target: Monomial,
    /// The vanishing combination before it is solved.
    pub relation: State,
    pub value: State,
}

/// Solves every quadratic rule for its target product, in rule order, and
/// returns an engine where those products are evaluations.
pub fn derive_products(engine: &Engine) -> Result<(Engine, Vec<Derivation>), GriessError> {
    type Target = (Gen, i64, Gen);
    let quads: Vec<(String, i64, Gen, Target)> = engine
        .rules()
        .rules()
        .iter()
        .filter_map(|r| match &r.kind {
            RuleKind::Quadratic { n, on, solves } => Some((r.id.clone(), *n, *on, *solves)),
            _ => None,
        })
        .collect();
    let mut current = engine.with_values(BTreeMap::new());
    let mut out = Vec::new();
    for (id, n, on, (g, k, h)) in quads {
        let relation = quadratic_instance(&current, n, on)?;
        let target = Monomial::new(vec![Mode::new(g, k)], Base::of(h));
        let c = relation
            .coefficient(&target)
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| GriessError::Derivation(format!("{id}: {target} does not occur with a rational coefficient in {relation}")))?;
        let mut rest = relation.clone();
        rest.add_term(target.clone(), SymbolicScalar::constant(-c.clone()));
        let value = rest.scale_q(&(-Rational::from_integer(1.into()) / &c));
        let rule = Rule::new(
            &format!("{id}*"),
            RuleKind::Evaluation { left: g, n: k, right: h, value: value.clone() },
            &format!("solved from {id}"),
        );
        current = current.with_rule(rule)?;
        out.push(Derivation { rule_id: id, target, relation, value });
    }
    Ok((current, out))
}

/// Two words whose pairing is evaluated along several routes.
pub fn pairing_probes() -> Vec<(Monomial, Monomial)> {
    let product = |g: Gen, h: Gen| Monomial::new(vec![Mode::new(g, 1)], Base::of(h));
    let omega = Monomial::new(vec![Mode::l(-2)], Base::Vac);
    let mut rights: Vec<Monomial> = vec![omega];
    rights.extend(Gen::PRIMARIES.iter().map(|&k| Monomial::base(Base::of(k))));
    for k in Gen::PRIMARIES {
        for l in Gen::PRIMARIES {
            rights.push(product(k, l));
        }
    }
    let mut probes = Vec::new();
    for g in Gen::PRIMARIES {
        for h in Gen::PRIMARIES {
            for r in &rights {
                probes.push((product(g, h), r.clone()));
            }
        }
    }
    probes
}

/// The values of the pairing `(a, b)` along the available routes: evaluate
/// both words first, or move the outer mode of either word across first.
pub fn route_values(engine: &Engine, a: &Monomial, b: &Monomial) -> Vec<Result<SymbolicScalar, GriessError>> {
    let mut out = Vec::new();
    out.push((|| engine.pair(&engine.normalize(a)?, &engine.normalize(b)?))());
    if let Some((o, rest)) = a.split_outer() {
        out.push((|| engine.pair(&engine.normalize(&rest)?, &engine.apply(o.adjoint(), &engine.normalize(b)?)?))());
    }
    if let Some((o, rest)) = b.split_outer() {
        out.push((|| engine.pair(&engine.apply(o.adjoint(), &engine.normalize(a)?)?, &engine.normalize(&rest)?))());
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Saturation {
    /// Affine equations `Σ c_i s_i + c_0 = 0`, as produced by route disagreement.
    pub equations: Vec<SymbolicScalar>,
    pub values: BTreeMap<String, SymbolicScalar>,
    pub rounds: usize,
}

/// Solves affine equations for every symbol outside `kept`; solved values may
/// depend on the kept symbols.
pub fn solve_affine(
    equations: &[SymbolicScalar],
    kept: &BTreeSet<String>,
) -> Result<BTreeMap<String, SymbolicScalar>, GriessError> {
    let mut unknowns = BTreeSet::new();
    let mut params = BTreeSet::new();
    let mut rows = Vec::new();
    for e in equations {
        let (lin, constant) =
            e.as_affine().ok_or_else(|| GriessError::Derivation(format!("non-affine equation {e}")))?;
        for v in lin.keys() {
            if kept.contains(v) {
                params.insert(v.clone());
            } else {
                unknowns.insert(v.clone());
            }
        }
        rows.push((lin, constant));
    }
    let cols: Vec<String> = unknowns.iter().chain(params.iter()).cloned().collect();
    let nu = unknowns.len();
    if rows.is_empty() {
        return Ok(BTreeMap::new());
    }
    let matrix_rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(lin, c)| {
            let mut r: Vec<Rational> = cols.iter().map(|v| lin.get(v).cloned().unwrap_or_else(Rational::zero)).collect();
            r.push(c.clone());
            r
        })
        .collect();
    let m = Matrix::from_rows(matrix_rows).expect("rows share the column set");
    let (r, pivots) = m.rref();
    let mut values = BTreeMap::new();
    for (i, &p) in pivots.iter().enumerate() {
        if p == cols.len() {
            return Err(GriessError::Inconsistent(format!("route equations force 0 = {}", r[(i, p)])));
        }
        if p >= nu {
            continue;
        }
        let free_unknown = (0..nu).any(|j| j != p && !r[(i, j)].is_zero());
        if free_unknown {
            continue;
        }
        let mut value = SymbolicScalar::constant(-r[(i, cols.len())].clone());
        for (j, name) in cols.iter().enumerate().skip(nu) {
            if !r[(i, j)].is_zero() {
                value = &value - &SymbolicScalar::var(name).scale(&r[(i, j)]);
            }
        }
        values.insert(cols[p].clone(), value);
    }
    Ok(values)
}

/// Repeats route comparison over [`pairing_probes`] until no new pairing value
/// is forced. Returns an engine that substitutes the forced values.
pub fn saturate(engine: &Engine, kept: &BTreeSet<String>) -> Result<(Engine, Saturation), GriessError> {
    let mut current = engine.with_values(BTreeMap::new());
    let mut sat = Saturation::default();
    for round in 1..=6 {
        sat.rounds = round;
        let mut equations = Vec::new();
        for (a, b) in pairing_probes() {
            let vals: Vec<SymbolicScalar> = route_values(&current, &a, &b).into_iter().filter_map(Result::ok).collect();
            for v in vals.iter().skip(1) {
                let diff = &vals[0] - v;
                if !diff.is_zero() && diff.as_affine().is_some() && !equations.contains(&diff) {
                    equations.push(diff);
                }
            }
        }
        let solved = solve_affine(&equations, kept)?;
        sat.equations.extend(equations);
        let fresh: BTreeMap<String, SymbolicScalar> =
            solved.into_iter().filter(|(k, _)| !sat.values.contains_key(k)).collect();
        if fresh.is_empty() {
            break;
        }
        sat.values.extend(fresh.clone());
        current = current.with_values(fresh);
    }
    Ok((current, sat))
}
