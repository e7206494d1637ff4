use num_traits::{One, Zero};

use super::bipoly::BiPolynomial;
use super::reduce::reduce_to_bipoly;
use super::ZhuError;
use crate::exactlin::{int, Matrix, Rational};
use crate::virasoro::{singular_vectors, VermaParams};

/// `(x-y)·∏_{i=1..r} [(x-y)² - 2i²(x+y) + i⁴]`. Already monic in `x^{2r+1}`.
///
/// `r = 0` yields `x - y`, the generator for the vacuum module.
pub fn closed_form_generator(r: u32) -> BiPolynomial {
    let x = BiPolynomial::x();
    let y = BiPolynomial::y();
    let d = &x - &y;
    let s = &x + &y;
    let d2 = d.pow(2);
    (1..=r).fold(d.clone(), |acc, i| {
        let i2 = int(i64::from(i) * i64::from(i));
        let factor = &(&d2 - &s.scale(&(int(2) * &i2))) + &BiPolynomial::constant(&i2 * &i2);
        &acc * &factor
    })
}

/// Divides `p` by its `x^deg` coefficient and returns the normalized polynomial
/// together with that coefficient.
pub fn normalize_monic_x(p: &BiPolynomial, deg: u32) -> Result<(BiPolynomial, Rational), ZhuError> {
    let lead = p.coeff(deg, 0);
    if lead.is_zero() {
        return Err(ZhuError::Normalization(deg));
    }
    Ok((p.scale(&(Rational::one() / &lead)), lead))
}

/// Image of the level-`2r+1` singular vector of `V(1, r²)` before normalization.
pub fn singular_vector_image(r: u32) -> Result<BiPolynomial, ZhuError> {
    if r == 0 {
        return Err(ZhuError::Precondition("r must be positive".into()));
    }
    let h = i64::from(r) * i64::from(r);
    let level = 2 * r + 1;
    let vs = singular_vectors(&VermaParams::ints(1, h), level).map_err(|_| ZhuError::SingularVectorNotFound(r))?;
    let v = vs.first().ok_or(ZhuError::SingularVectorNotFound(r))?;
    Ok(reduce_to_bipoly(v))
}

pub fn generator_from_singular_vector_scaled(r: u32) -> Result<(BiPolynomial, Rational), ZhuError> {
    normalize_monic_x(&singular_vector_image(r)?, 2 * r + 1)
}

pub fn generator_from_singular_vector(r: u32) -> Result<BiPolynomial, ZhuError> {
    Ok(generator_from_singular_vector_scaled(r)?.0)
}

/// Vandermonde sample nodes `n = r, …, 3r+1`.
pub fn vandermonde_nodes(r: u32) -> Vec<u32> {
    (r..=3 * r + 1).collect()
}

/// Solves `Σ_{i≤2r} a_i(n²)·k^{2i} = -k^{2(2r+1)}` for `k = n-r, …, n+r`.
pub fn sample_coefficients(r: u32, n: u32) -> Result<Vec<Rational>, ZhuError> {
    let deg = 2 * r + 1;
    let ks: Vec<Rational> = (n - r..=n + r).map(|k| int(i64::from(k) * i64::from(k))).collect();
    let rows: Vec<Vec<Rational>> = ks
        .iter()
        .map(|k2| (0..deg).map(|i| num_traits::pow(k2.clone(), i as usize)).collect())
        .collect();
    let rhs: Vec<Rational> = ks.iter().map(|k2| -num_traits::pow(k2.clone(), deg as usize)).collect();
    let m = Matrix::from_rows(rows).expect("square sample system");
    m.solve(&rhs).map_err(|_| ZhuError::SingularSample { r, n })
}

/// Coefficients `c_0..c_{len-1}` of the interpolant through `(xs[j], vals[j])`.
fn interpolate(xs: &[Rational], vals: &[Rational]) -> Result<Vec<Rational>, ZhuError> {
    let rows: Vec<Vec<Rational>> =
        xs.iter().map(|x| (0..xs.len()).map(|e| num_traits::pow(x.clone(), e)).collect()).collect();
    Matrix::from_rows(rows)
        .expect("square interpolation system")
        .solve(vals)
        .map_err(|_| ZhuError::InterpolationInconsistent)
}

/// `Σ a_i(x) y^i` with `a_{2r+1} = 1`, before normalization.
pub fn vandermonde_raw(r: u32) -> Result<BiPolynomial, ZhuError> {
    if r == 0 {
        return Err(ZhuError::Precondition("r must be positive".into()));
    }
    let deg = 2 * r + 1;
    let nodes = vandermonde_nodes(r);
    let xs: Vec<Rational> = nodes.iter().map(|&n| int(i64::from(n) * i64::from(n))).collect();
    let samples = nodes.iter().map(|&n| sample_coefficients(r, n)).collect::<Result<Vec<_>, _>>()?;
    let mut f = BiPolynomial::monomial(0, deg, Rational::one());
    for i in 0..deg {
        let vals: Vec<Rational> = samples.iter().map(|s| s[i as usize].clone()).collect();
        let coeffs = interpolate(&xs, &vals)?;
        for (e, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() && e as u32 > deg - i {
                return Err(ZhuError::InterpolationInconsistent);
            }
            f.add_term(e as u32, i, c);
        }
    }
    Ok(f)
}

pub fn generator_by_vandermonde_scaled(r: u32) -> Result<(BiPolynomial, Rational), ZhuError> {
    normalize_monic_x(&vandermonde_raw(r)?, 2 * r + 1)
}

pub fn generator_by_vandermonde(r: u32) -> Result<BiPolynomial, ZhuError> {
    Ok(generator_by_vandermonde_scaled(r)?.0)
}
