//! Truncated q-series with a rational leading exponent.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{exact_isqrt, fmt_rational, frac, int, Rational};
use crate::virasoro::partition_counts;

pub const DEFAULT_ORDER: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("offsets {0} and {1} do not differ by an integer")]
    IncompatibleOffsets(String, String),
    #[error("h = {0} has the form m^2/4 with m odd; no submodule generator is available")]
    UnsupportedWeight(String),
    #[error("sl2 highest weight {0} is odd")]
    OddWeight(u64),
    #[error("window {0}..={1} exceeds series order {2}")]
    WindowOutOfRange(usize, usize, usize),
    #[error("series with vanishing leading coefficient cannot be inverted")]
    NotInvertible,
}

/// `q^offset · Σ_{n=0..=order} coeffs[n] qⁿ + O(q^{offset+order+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    offset: Rational,
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(offset: Rational, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least the q^offset coefficient");
        QSeries { offset, coeffs }
    }

    pub fn from_ints(offset: Rational, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Rational::zero(), vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&n| !self.coeffs[n].is_zero()).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.min(self.order()) + 1, Rational::zero());
        Self::new(self.offset.clone(), coeffs)
    }

    pub fn shift(&self, by: &Rational) -> Self {
        Self::new(&self.offset + by, self.coeffs.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.offset.clone(), self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Sum, known through the smaller of the two absolute truncation points.
    pub fn add(&self, other: &Self) -> Result<Self, QSeriesError> {
        let gap = &other.offset - &self.offset;
        if !gap.is_integer() {
            return Err(QSeriesError::IncompatibleOffsets(fmt_rational(&self.offset), fmt_rational(&other.offset)));
        }
        let gap = gap.to_integer();
        let (lo, hi, d) = if gap >= BigInt::zero() { (self, other, gap) } else { (other, self, -gap) };
        let d: usize = usize::try_from(d).expect("offset gap fits in usize");
        let top = lo.order().min(hi.order() + d);
        let mut coeffs = lo.coeffs[..=top].to_vec();
        for (n, c) in coeffs.iter_mut().enumerate().skip(d) {
            *c += hi.coeff(n - d);
        }
        Ok(Self::new(lo.offset.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QSeriesError> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product truncated at the smaller relative order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(&self.offset + &other.offset, coeffs)
    }

    pub fn inverse(&self) -> Result<Self, QSeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(QSeriesError::NotInvertible);
        }
        let mut inv: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        inv.push(Rational::one() / a0);
        for n in 1..self.coeffs.len() {
            let s: Rational = (1..=n).map(|k| &self.coeffs[k] * &inv[n - k]).sum();
            inv.push(-s / a0);
        }
        Ok(Self::new(-&self.offset, inv))
    }

    pub fn pow(&self, e: i64) -> Result<Self, QSeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(self.order());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.offset.is_zero() {
            write!(f, "q^({})*", fmt_rational(&self.offset))?;
        }
        write!(f, "(")?;
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            first = false;
            let body = match (n, mag.is_one()) {
                (0, _) => fmt_rational(&mag),
                (1, true) => "q".to_string(),
                (1, false) => format!("{}*q", fmt_rational(&mag)),
                (_, true) => format!("q^{n}"),
                (_, false) => format!("{}*q^{n}", fmt_rational(&mag)),
            };
            write!(f, "{body}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{}))", self.order() + 1)
    }
}

fn partition_series(order: usize) -> Vec<Rational> {
    partition_counts(order).into_iter().map(Rational::from_integer).collect()
}

/// `q^{h-c/24} / ∏(1-qⁿ)`.
pub fn verma_character(c: &Rational, h: &Rational, order: usize) -> QSeries {
    QSeries::new(h - c / int(24), partition_series(order))
}

/// `m` with `h = m²`, if any.
pub fn integer_sqrt_weight(h: &Rational) -> Option<u64> {
    if !h.is_integer() || h.is_negative() {
        return None;
    }
    let n = u64::try_from(h.to_integer()).ok()?;
    exact_isqrt(n)
}

/// Character of `L(1,h)`. Rejects `h = m²/4` with `m` odd.
pub fn irr_character_c1(h: &Rational, order: usize) -> Result<QSeries, QSeriesError> {
    let offset = h - frac(1, 24);
    let p = partition_series(order);
    if let Some(m) = integer_sqrt_weight(h) {
        let drop = usize::try_from(2 * m + 1).unwrap_or(usize::MAX);
        let coeffs = (0..=order).map(|n| if n >= drop { &p[n] - &p[n - drop] } else { p[n].clone() }).collect();
        return Ok(QSeries::new(offset, coeffs));
    }
    if integer_sqrt_weight(&(h * int(4))).is_some() {
        return Err(QSeriesError::UnsupportedWeight(fmt_rational(h)));
    }
    Ok(QSeries::new(offset, p))
}

/// `q^{1/24} ∏(1-qⁿ)`, from Euler's pentagonal theorem.
pub fn eta_series(order: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in 0i64.. {
        let a = usize::try_from(k * (3 * k - 1) / 2).unwrap();
        if a > order {
            break;
        }
        let sign = if k.is_odd() { -1 } else { 1 };
        coeffs[a] += int(sign);
        if k > 0 {
            let b = usize::try_from(k * (3 * k + 1) / 2).unwrap();
            if b <= order {
                coeffs[b] += int(sign);
            }
        }
    }
    QSeries::new(frac(1, 24), coeffs)
}

/// `η^k` for any integer `k`.
pub fn eta_power(k: i64, order: usize) -> QSeries {
    eta_series(order).pow(k).expect("eta has leading coefficient 1")
}

/// `Σ_{k∈ℤ} q^{k²}`.
pub fn theta_series(order: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    for k in 1usize.. {
        if k * k > order {
            break;
        }
        coeffs[k * k] += int(2);
    }
    QSeries::new(Rational::zero(), coeffs)
}

/// `Σ_{m≥0} (2m+1) q^{m²}(1-q^{2m+1}) - θ` through `order`.
pub fn lattice_residual(order: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    for m in 0usize.. {
        if m * m > order {
            break;
        }
        let mult = int(2 * m as i64 + 1);
        coeffs[m * m] += &mult;
        let hi = m * m + 2 * m + 1;
        if hi <= order {
            coeffs[hi] -= &mult;
        }
    }
    let lhs = QSeries::new(Rational::zero(), coeffs);
    lhs.sub(&theta_series(order)).expect("both series have offset 0")
}

pub fn lattice_decomposition_check(order: usize) -> (bool, QSeries) {
    let residual = lattice_residual(order);
    (residual.is_zero(), residual)
}

/// Highest weights in `W_{d1} ⊗ W_{d2}`, each of multiplicity one.
pub fn sl2_tensor_multiplicities(d1: u64, d2: u64) -> Result<Vec<u64>, QSeriesError> {
    for d in [d1, d2] {
        if d % 2 == 1 {
            return Err(QSeriesError::OddWeight(d));
        }
    }
    Ok((d1.abs_diff(d2)..=d1 + d2).step_by(2).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    PolynomiallyBounded,
    SuperpolynomialEvidence,
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthVerdict::PolynomiallyBounded => "polynomially-bounded",
            GrowthVerdict::SuperpolynomialEvidence => "superpolynomial-evidence",
        })
    }
}

/// Diagnostic only: a finite window says nothing about asymptotics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub window: (usize, usize),
    pub witnesses: Vec<(u32, Option<usize>)>,
    pub verdict: GrowthVerdict,
}

/// For each `k`, the least `n` in `window` with `|a_n| > n^k`.
pub fn growth_report(s: &QSeries, window: (usize, usize), exponents: &[u32]) -> Result<GrowthReport, QSeriesError> {
    let (lo, hi) = window;
    if lo > hi || hi > s.order() {
        return Err(QSeriesError::WindowOutOfRange(lo, hi, s.order()));
    }
    let witnesses: Vec<(u32, Option<usize>)> = exponents
        .iter()
        .map(|&k| {
            let w = (lo..=hi).find(|&n| s.coeffs[n].abs() > Rational::from_integer(BigInt::from(n).pow(k)));
            (k, w)
        })
        .collect();
    let all = !witnesses.is_empty() && witnesses.iter().all(|(_, w)| w.is_some());
    let verdict = if all { GrowthVerdict::SuperpolynomialEvidence } else { GrowthVerdict::PolynomiallyBounded };
    Ok(GrowthReport { window, witnesses, verdict })
}

/// `(1-q)/∏_{n≥2}(1-qⁿ)` with offset 0.
pub fn nilpotent_branch_series(order: usize) -> QSeries {
    let p = partition_series(order);
    let coeffs = (0..=order)
        .map(|n| {
            let mut c = p[n].clone();
            if n >= 1 {
                c -= &p[n - 1] * int(2);
            }
            if n >= 2 {
                c += &p[n - 2];
            }
            c
        })
        .collect();
    QSeries::new(Rational::zero(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let s = QSeries::from_ints(frac(-1, 24), &[1, -2, 0, 3]);
        assert_eq!(s.to_string(), "q^(-1/24)*(1 - 2*q + 3*q^3 + O(q^4))");
        assert_eq!(QSeries::zero(2).to_string(), "(0 + O(q^3))");
    }

    #[test]
    fn add_aligns_offsets() {
        let a = QSeries::from_ints(int(0), &[1, 1, 1, 1]);
        let b = QSeries::from_ints(int(2), &[5, 5, 5, 5]);
        let s = a.add(&b).unwrap();
        assert_eq!(s, QSeries::from_ints(int(0), &[1, 1, 6, 6]));
        assert!(a.add(&QSeries::one(3).shift(&frac(1, 2))).is_err());
    }
}
