//! Zhu-algebra calculus for `L(1,0)`.
//!
//! `A(V(1,h))` is identified with `ℚ[x,y]`, `x` acting on the left and `y` on
//! the right. The maximal submodule of `V(1,r²)` maps to the ideal generated
//! by a single polynomial; fusion dimensions are read off its zero locus.

mod bipoly;
mod fusion;
mod generator;
mod reduce;

use thiserror::Error;

pub use bipoly::BiPolynomial;
pub use fusion::{fusion_dim_generic, fusion_dim_nonsquare_pair, fusion_dim_squares};
pub use generator::{
    closed_form_generator, generator_by_vandermonde, generator_by_vandermonde_scaled, generator_from_singular_vector,
    generator_from_singular_vector_scaled, normalize_monic_x, sample_coefficients, singular_vector_image,
    vandermonde_nodes, vandermonde_raw,
};
pub use reduce::{
    reduce_to_bipoly, standard_preimage, NegWord, ReductionTrace, TraceRule, TraceStep, ZhuReducer,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZhuError {
    #[error("element belongs to a different Verma module than the reducer")]
    ParamsMismatch,
    #[error("words may only contain negative modes")]
    NonNegativeMode,
    #[error("no singular vector of V(1,{0}^2) at level 2*{0}+1")]
    SingularVectorNotFound(u32),
    #[error("sample system for r={r} at node n={n} is singular")]
    SingularSample { r: u32, n: u32 },
    #[error("interpolated coefficients exceed their degree bound")]
    InterpolationInconsistent,
    #[error("coefficient of x^{0} vanishes; cannot normalize")]
    Normalization(u32),
    #[error("{0} is a perfect square; use fusion_dim_squares")]
    PerfectSquare(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("interval rule and generator criterion disagree at (m,n,k)=({m},{n},{k})")]
    CriterionDisagreement { m: i64, n: i64, k: i64 },
}
