//! Symbolic mode calculus for a weight-2 subalgebra spanned by `ω, x, y, u`
//! inside a vertex operator algebra with `V_1 = 0` and central charge 1.
//!
//! States are linear combinations of mode words applied to `1, x, y, u`, with
//! coefficients in [`SymbolicScalar`]. Every fact the [`Engine`] uses is a
//! [`Rule`] carrying a source tag, and the engine refuses untagged rules.
//! Products that no rule pins down stay as opaque monomials and pairings that
//! no rule pins down stay as indeterminates, so a final value that comes out
//! rational is a proof that those unknowns cancel.
//!
//! [`verify`] replays the nilpotent case: with `x·x = 0` a weight-4 highest
//! weight vector `v` exists, and `x` with `v` would give an intertwining
//! operator that the fusion rules of [`crate::zhu`] forbid.

mod derive;
mod engine;
mod rules;
mod scalar;
mod state;
pub mod verify;

pub use derive::{
    derive_products, pairing_probes, quadratic_instance, route_values, saturate, solve_affine, Derivation, Saturation,
};
pub use engine::{binom, pairing_symbol, trilinear_symbol, Engine, DEFAULT_FUEL, WEIGHT_CAP};
pub use rules::{Rule, RuleKind, RuleSet};
pub use scalar::SymbolicScalar;
pub use state::{Base, Gen, Mode, ModeWord, Monomial, State};
pub use verify::{
    build_engine, check_xiv_zero, rule_set, solved_pairings, v_state, Built, FusionCheck, contradiction_report, lemma54_chain, pair_y3v_u, pair_y3v_u_symbolic,
    solve_hw_coefficients, Configuration, ContradictionReport, EngineOptions, HwCoefficients, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GriessError {
    #[error("rule {0} has no source")]
    UncitedRule(String),
    #[error("insufficient rules: {0}")]
    InsufficientRules(String),
    #[error("weight {0} exceeds the state-space cap")]
    WeightCap(i64),
    #[error("rewriting did not terminate within the step budget")]
    FuelExhausted,
    #[error("inconsistent rules: {0}")]
    Inconsistent(String),
    #[error("insufficient rules: indeterminate survived in {0}")]
    IndeterminateSurvived(String),
    #[error("derivation failed: {0}")]
    Derivation(String),
}
