//! Verma modules `V(c,h)` for the Virasoro algebra.
//!
//! Basis vectors are PBW words `L(-n1)···L(-nk)v` with `n1 ≥ … ≥ nk ≥ 1`,
//! indexed by [`Partition`]. Modes act by commuting positive modes to the
//! right with `[L(m),L(n)] = (m-n)L(m+n) + δ_{m+n,0}(m³-m)c/12` until they
//! annihilate `v` or are absorbed by `L(0)v = hv`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{fmt_rational, int, Matrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VirasoroError {
    #[error("elements belong to different Verma modules")]
    ParamsMismatch,
    #[error("elements live at different levels ({0} and {1})")]
    LevelMismatch(i64, i64),
    #[error("singular vectors are only searched at level >= 1")]
    LevelZero,
    #[error("invalid partition {0:?}: parts must be positive and non-increasing")]
    InvalidPartition(Vec<u32>),
}

/// A partition stored as a non-increasing list of positive parts.
///
/// The ordering is reverse-lexicographic, so `[3] < [2,1] < [1,1,1]`, which is
/// also the order [`partitions`] produces.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, VirasoroError> {
        let ok = parts.iter().all(|&p| p >= 1) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition(parts))
        } else {
            Err(VirasoroError::InvalidPartition(parts))
        }
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "L(-{p})")?;
        }
        write!(f, "v")
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of each `n` in `0..=max`, by Euler's pentagonal recurrence.
pub fn partition_counts(max: usize) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut p = vec![BigInt::zero(); max + 1];
    p[0] = BigInt::one();
    for n in 1..=max {
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let g2 = (k * (3 * k + 1) / 2) as usize;
            let sign_plus = k % 2 == 1;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if sign_plus {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[n] = acc;
    }
    p
}

/// Central charge and highest weight of a Verma module.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VermaParams {
    pub c: Rational,
    pub h: Rational,
}

impl VermaParams {
    pub fn new(c: Rational, h: Rational) -> Self {
        VermaParams { c, h }
    }

    pub fn ints(c: i64, h: i64) -> Self {
        VermaParams { c: int(c), h: int(h) }
    }
}

/// A homogeneous element of `V(c,h)`: a finite combination of PBW words all at
/// the same level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    params: VermaParams,
    level: i64,
    terms: BTreeMap<Partition, Rational>,
}

impl ModuleElement {
    pub fn zero(params: VermaParams, level: i64) -> Self {
        ModuleElement { params, level, terms: BTreeMap::new() }
    }

    /// The highest weight vector `v`.
    pub fn vacuum(params: VermaParams) -> Self {
        Self::basis(params, Partition::empty())
    }

    pub fn basis(params: VermaParams, p: Partition) -> Self {
        let level = i64::from(p.weight());
        let mut terms = BTreeMap::new();
        terms.insert(p, Rational::one());
        ModuleElement { params, level, terms }
    }

    /// Builds an element from `(coefficient, partition)` pairs. All partitions
    /// must share the same weight.
    pub fn from_terms(
        params: VermaParams,
        level: i64,
        terms: impl IntoIterator<Item = (Partition, Rational)>,
    ) -> Result<Self, VirasoroError> {
        let mut e = Self::zero(params, level);
        for (p, c) in terms {
            let w = i64::from(p.weight());
            if w != level {
                return Err(VirasoroError::LevelMismatch(level, w));
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, p: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
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

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Partition) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.params.clone(), self.level);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, VirasoroError> {
        if self.params != other.params {
            return Err(VirasoroError::ParamsMismatch);
        }
        if self.level != other.level && !self.is_zero() && !other.is_zero() {
            return Err(VirasoroError::LevelMismatch(self.level, other.level));
        }
        let level = if self.is_zero() { other.level } else { self.level };
        let mut out = self.clone();
        out.level = level;
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coefficient vector over `partitions(level)`.
    pub fn to_vector(&self) -> Vec<Rational> {
        let Ok(level) = u32::try_from(self.level) else {
            return Vec::new();
        };
        partitions(level).iter().map(|p| self.coefficient(p)).collect()
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

type Terms = Vec<(Vec<u32>, Rational)>;

/// Mode action on one Verma module, memoised on `(mode, basis word)`.
pub struct VermaModule {
    params: VermaParams,
    memo: RefCell<HashMap<(i64, Vec<u32>), Terms>>,
}

impl VermaModule {
    pub fn new(params: VermaParams) -> Self {
        VermaModule { params, memo: RefCell::new(HashMap::new()) }
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    /// `L(m)` applied to a PBW word, as a list of PBW words with coefficients.
    fn act_word(&self, m: i64, word: &[u32]) -> Vec<(Vec<u32>, Rational)> {
        let key = (m, word.to_vec());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let result = self.act_word_uncached(m, word);
        self.memo.borrow_mut().insert(key, result.clone());
        result
    }

    fn act_word_uncached(&self, m: i64, word: &[u32]) -> Vec<(Vec<u32>, Rational)> {
        let level: i64 = word.iter().map(|&p| i64::from(p)).sum();
        if m == 0 {
            return vec![(word.to_vec(), &self.params.h + int(level))];
        }
        let Some((&first, rest)) = word.split_first() else {
            return if m > 0 {
                Vec::new()
            } else {
                vec![(vec![m.unsigned_abs() as u32], Rational::one())]
            };
        };
        let n1 = i64::from(first);
        if m < 0 && -m >= n1 {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push((-m) as u32);
            w.extend_from_slice(word);
            return vec![(w, Rational::one())];
        }
        // L(m)L(-n1)rest = L(-n1)L(m)rest + [L(m),L(-n1)]rest
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (w, c) in self.act_word(m, rest) {
            for (w2, c2) in self.act_word(-n1, &w) {
                *acc.entry(w2).or_insert_with(Rational::zero) += &c * c2;
            }
        }
        let bracket = int(m + n1);
        if !bracket.is_zero() {
            for (w, c) in self.act_word(m - n1, rest) {
                *acc.entry(w).or_insert_with(Rational::zero) += &bracket * c;
            }
        }
        if m == n1 {
            let central = int(m * m * m - m) * &self.params.c / int(12);
            if !central.is_zero() {
                *acc.entry(rest.to_vec()).or_insert_with(Rational::zero) += central;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn apply_mode(&self, m: i64, e: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero(self.params.clone(), e.level - m);
        for (p, c) in &e.terms {
            for (w, c2) in self.act_word(m, p.parts()) {
                out.add_term(Partition(w), c * c2);
            }
        }
        out
    }

    /// Applies `L(modes[0])` first, then `L(modes[1])`, and so on.
    pub fn apply_modes(&self, modes: &[i64], e: &ModuleElement) -> ModuleElement {
        modes.iter().fold(e.clone(), |acc, &m| self.apply_mode(m, &acc))
    }

    /// Shapovalov form at `level`: entry `(λ,μ)` is the coefficient of `v` in
    /// `L(μk)···L(μ1) L(-λ1)···L(-λj) v`.
    pub fn gram_matrix(&self, level: u32) -> Matrix {
        let basis = partitions(level);
        let n = basis.len();
        let mut g = Matrix::zeros(n, n);
        for (i, lam) in basis.iter().enumerate() {
            let e = ModuleElement::basis(self.params.clone(), lam.clone());
            for (j, mu) in basis.iter().enumerate() {
                if j < i {
                    g[(i, j)] = g[(j, i)].clone();
                    continue;
                }
                let modes: Vec<i64> = mu.parts().iter().map(|&p| i64::from(p)).collect();
                g[(i, j)] = self.apply_modes(&modes, &e).coefficient(&Partition::empty());
            }
        }
        g
    }

    /// Basis of vectors at `level` killed by `L(1)` and `L(2)`, each scaled so
    /// its first nonzero coefficient is 1.
    pub fn singular_vectors(&self, level: u32) -> Result<Vec<ModuleElement>, VirasoroError> {
        if level == 0 {
            return Err(VirasoroError::LevelZero);
        }
        let basis = partitions(level);
        let below1 = partitions(level - 1);
        let below2 = if level >= 2 { partitions(level - 2) } else { Vec::new() };
        let mut m = Matrix::zeros(below1.len() + below2.len(), basis.len());
        for (j, p) in basis.iter().enumerate() {
            let e = ModuleElement::basis(self.params.clone(), p.clone());
            let l1 = self.apply_mode(1, &e);
            for (i, q) in below1.iter().enumerate() {
                m[(i, j)] = l1.coefficient(q);
            }
            if level >= 2 {
                let l2 = self.apply_mode(2, &e);
                for (i, q) in below2.iter().enumerate() {
                    m[(below1.len() + i, j)] = l2.coefficient(q);
                }
            }
        }
        let vectors = m
            .nullspace()
            .into_iter()
            .map(|v| {
                let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
                let terms = basis.iter().cloned().zip(v.into_iter().map(|c| c / &lead));
                ModuleElement::from_terms(self.params.clone(), i64::from(level), terms)
                    .expect("basis partitions share the level")
            })
            .collect();
        Ok(vectors)
    }

    pub fn graded_dims_irreducible(&self, max_level: u32) -> Vec<usize> {
        (0..=max_level).map(|n| self.gram_matrix(n).rank()).collect()
    }
}

pub fn apply_mode(m: i64, e: &ModuleElement) -> ModuleElement {
    VermaModule::new(e.params().clone()).apply_mode(m, e)
}

pub fn gram_matrix(p: &VermaParams, level: u32) -> Matrix {
    VermaModule::new(p.clone()).gram_matrix(level)
}

pub fn singular_vectors(p: &VermaParams, level: u32) -> Result<Vec<ModuleElement>, VirasoroError> {
    VermaModule::new(p.clone()).singular_vectors(level)
}

/// Ranks of the Gram matrices at levels `0..=max_level`, i.e. the graded
/// dimensions of the irreducible quotient `L(c,h)`.
pub fn graded_dims_irreducible(p: &VermaParams, max_level: u32) -> Vec<usize> {
    VermaModule::new(p.clone()).graded_dims_irreducible(max_level)
}

/// First level in `1..=max_level` where the Gram matrix is degenerate.
pub fn first_singular_level(p: &VermaParams, max_level: u32) -> Option<u32> {
    let module = VermaModule::new(p.clone());
    (1..=max_level).find(|&n| module.gram_matrix(n).rank() < partitions(n).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::frac;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    /// Brute-force enumeration of partitions as sorted multisets, used to
    /// check the generator independently.
    fn brute_partitions(n: u32) -> usize {
        fn count(n: u32, max: u32) -> usize {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|p| count(n - p, p)).sum()
        }
        count(n, n)
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(8).len(), 22);
        assert_eq!(brute_partitions(8), 22);
        assert_eq!(partitions(3), vec![part(&[3]), part(&[2, 1]), part(&[1, 1, 1])]);
        let mut sorted = partitions(7);
        sorted.sort();
        assert_eq!(sorted, partitions(7));
        let counts = partition_counts(12);
        for n in 0..=12u32 {
            assert_eq!(counts[n as usize], num_bigint::BigInt::from(partitions(n).len()));
        }
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn single_mode_examples() {
        let p = VermaParams::new(frac(3, 5), frac(2, 7));
        let l1v = ModuleElement::basis(p.clone(), part(&[1]));
        let r = apply_mode(1, &l1v);
        assert_eq!(r.coefficient(&Partition::empty()), frac(4, 7));
        assert_eq!(r.terms().len(), 1);

        let l2v = ModuleElement::basis(p.clone(), part(&[2]));
        let r = apply_mode(2, &l2v);
        // 4h + c/2
        assert_eq!(r.coefficient(&Partition::empty()), frac(8, 7) + frac(3, 10));

        let v = ModuleElement::vacuum(p.clone());
        assert_eq!(apply_mode(-1, &v), l1v);
    }

    #[test]
    fn gram_small_levels() {
        assert_eq!(gram_matrix(&VermaParams::ints(1, 1), 1), Matrix::from_i64(&[&[2]]));
        assert_eq!(gram_matrix(&VermaParams::ints(1, 0), 1), Matrix::from_i64(&[&[0]]));
        // level 2 basis [L(-2)v, L(-1)^2 v]: [[4h+c/2, 6h],[6h, 4h(2h+1)]]
        let g = gram_matrix(&VermaParams::ints(1, 1), 2);
        assert_eq!(g, Matrix::from_rows(vec![vec![frac(9, 2), int(6)], vec![int(6), int(12)]]).unwrap());
        let g3 = gram_matrix(&VermaParams::ints(1, 1), 3);
        assert_eq!(g3.rows(), 3);
        assert!(g3.is_symmetric());
        assert_eq!(g3.det().unwrap(), int(0));
    }

    #[test]
    fn singular_vector_examples() {
        let sv = singular_vectors(&VermaParams::ints(1, 0), 1).unwrap();
        assert_eq!(sv, vec![ModuleElement::basis(VermaParams::ints(1, 0), part(&[1]))]);
        assert!(singular_vectors(&VermaParams::ints(1, 1), 2).unwrap().is_empty());
        let sv = singular_vectors(&VermaParams::ints(1, 1), 3).unwrap();
        assert_eq!(sv.len(), 1);
        let module = VermaModule::new(VermaParams::ints(1, 1));
        assert!(module.apply_mode(1, &sv[0]).is_zero());
        assert!(module.apply_mode(2, &sv[0]).is_zero());
        // L(-3)v - L(-2)L(-1)v + (1/4)... normalised with leading coefficient 1
        assert_eq!(sv[0].coefficient(&part(&[3])), int(1));
        assert!(singular_vectors(&VermaParams::ints(1, 1), 0).is_err());
    }

    #[test]
    fn graded_dims_examples() {
        assert_eq!(graded_dims_irreducible(&VermaParams::ints(1, 2), 3), vec![1, 1, 2, 3]);
        assert_eq!(graded_dims_irreducible(&VermaParams::ints(1, 1), 3), vec![1, 1, 2, 2]);
        assert_eq!(graded_dims_irreducible(&VermaParams::ints(2, 1), 3), vec![1, 1, 2, 3]);
    }

    #[test]
    fn rank_profile_for_square_weights() {
        for m in 0u32..=2 {
            let p = VermaParams::ints(1, i64::from(m * m));
            let s = 2 * m + 1;
            let dims = graded_dims_irreducible(&p, s + 3);
            for (n, &d) in dims.iter().enumerate() {
                let n = n as u32;
                let full = partitions(n).len();
                let expected = if n < s { full } else { full - partitions(n - s).len() };
                assert_eq!(d, expected, "m={m} level={n}");
            }
        }
    }

    #[test]
    fn kernel_maps_into_lower_kernels() {
        let module = VermaModule::new(VermaParams::ints(1, 1));
        for level in 3u32..=5 {
            let g = module.gram_matrix(level);
            for v in g.nullspace() {
                let e = ModuleElement::from_terms(
                    module.params().clone(),
                    i64::from(level),
                    partitions(level).into_iter().zip(v),
                )
                .unwrap();
                for m in [1i64, 2] {
                    let image = module.apply_mode(m, &e);
                    let lower = level as i64 - m;
                    let gl = module.gram_matrix(lower as u32);
                    let iv = image.to_vector();
                    assert!(gl.mul_vec(&iv).unwrap().iter().all(Zero::is_zero));
                }
            }
        }
    }

    #[test]
    fn display_element() {
        let p = VermaParams::ints(1, 0);
        let e = ModuleElement::from_terms(p, 3, [(part(&[2, 1]), int(-2)), (part(&[3]), frac(1, 2))]).unwrap();
        assert_eq!(e.to_string(), "1/2*L(-3)v - 2*L(-2)L(-1)v");
    }
}
