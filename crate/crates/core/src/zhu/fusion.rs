use num_traits::Zero;

use super::generator::closed_form_generator;
use super::ZhuError;
use crate::exactlin::is_perfect_square;

fn sq(n: u64) -> i64 {
    i64::try_from(n * n).expect("fusion inputs fit in i64 after squaring")
}

/// Fusion dimension for `L(1,m²) × L(1,n²) → L(1,k²)`.
///
/// The interval rule is cross-checked against the vanishing of
/// `f_{min(m,n)}(k², max(m,n)²)`.
pub fn fusion_dim_squares(m: u64, n: u64, k: u64) -> Result<u32, ZhuError> {
    let by_interval = m.abs_diff(n) <= k && k <= m + n;
    let (small, large) = if m <= n { (m, n) } else { (n, m) };
    let small = u32::try_from(small).map_err(|_| ZhuError::Precondition("m too large".into()))?;
    let by_generator = closed_form_generator(small).eval_int(sq(k), sq(large)).is_zero();
    if by_interval != by_generator {
        return Err(ZhuError::CriterionDisagreement { m: m as i64, n: n as i64, k: k as i64 });
    }
    Ok(u32::from(by_interval))
}

/// Fusion dimension for `L(1,m²) × L(1,n) → L(1,k)` with `n` not a square.
pub fn fusion_dim_generic(_m: u64, n: u64, k: u64) -> Result<u32, ZhuError> {
    if n == 0 || is_perfect_square(n) {
        return Err(ZhuError::PerfectSquare(n));
    }
    Ok(u32::from(k == n))
}

/// Intertwiners of type `L(1,m) × L(1,n)` for distinct non-squares vanish.
pub fn fusion_dim_nonsquare_pair(m: u64, n: u64) -> Result<u32, ZhuError> {
    if m == n {
        return Err(ZhuError::Precondition(format!("m = n = {m}")));
    }
    for v in [m, n] {
        if v == 0 || is_perfect_square(v) {
            return Err(ZhuError::Precondition(format!("{v} is a perfect square")));
        }
    }
    Ok(0)
}
