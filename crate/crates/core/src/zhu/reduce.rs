//! Reduction of Verma-module vectors to their class in `A(V(c,h)) ≅ ℚ[x,y]`.
//!
//! A word `L(-m)w` with the outermost mode `m ≥ 3` is rewritten modulo `O(W)`
//! using `(L(-m) + 2L(-m+1) + L(-m+2))w ∈ O(W)`. Outermost `L(-1)` and `L(-2)`
//! are removed with the two star actions
//!
//! ```text
//! [(L(-2) + 2L(-1) + L(0)) w] = x·[w]
//! [(L(-2) + L(-1)) w]         = [w]·y
//! ```
//!
//! where `L(0)w = (h + level(w))w`. Every rewrite shortens the word or lowers
//! its outermost mode, so the recursion terminates.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::bipoly::BiPolynomial;
use super::ZhuError;
use crate::exactlin::{int, Rational};
use crate::virasoro::{ModuleElement, VermaParams};

/// A word `L(-n1)L(-n2)···L(-nk)v` in negative modes, outermost first. The
/// parts need not be ordered.
pub type NegWord = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceRule {
    /// `v ↦ 1`.
    Vacuum,
    /// `L(-m)w ≡ -2L(-m+1)w - L(-m+2)w` for `m ≥ 3`.
    Shift { m: u32 },
    /// `L(-1)w ↦ (x - y - (h + level w))·[w]`.
    StarL1,
    /// `L(-2)w ↦ (2y - x + (h + level w))·[w]`.
    StarL2,
}

/// One rewrite. `children` index earlier steps of the same trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub word: NegWord,
    pub rule: TraceRule,
    pub children: Vec<usize>,
    pub result: BiPolynomial,
}

/// Log of a reduction, in evaluation order, plus the top-level combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub h: Rational,
    pub steps: Vec<TraceStep>,
    pub top: Vec<(usize, Rational)>,
    pub output: BiPolynomial,
}

impl ReductionTrace {
    /// Recomputes every step from its children and the rule, and the output
    /// from the top-level combination. Returns the replayed output when every
    /// recorded result matches.
    pub fn replay(&self) -> Option<BiPolynomial> {
        let mut values: Vec<BiPolynomial> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            if step.children.iter().any(|&c| c >= values.len()) {
                return None;
            }
            let child = |i: usize| &values[step.children[i]];
            let value = match step.rule {
                TraceRule::Vacuum => BiPolynomial::one(),
                TraceRule::Shift { .. } => {
                    &child(0).scale(&int(-2)) - child(1)
                }
                TraceRule::StarL1 | TraceRule::StarL2 => {
                    let inner_level: u32 = step.word[1..].iter().sum();
                    let factor = star_factor(&step.rule, &self.h, inner_level);
                    &factor * child(0)
                }
            };
            if value != step.result {
                return None;
            }
            values.push(value);
        }
        let mut out = BiPolynomial::zero();
        for (i, c) in &self.top {
            out = &out + &values.get(*i)?.scale(c);
        }
        (out == self.output).then_some(out)
    }
}

fn star_factor(rule: &TraceRule, h: &Rational, inner_level: u32) -> BiPolynomial {
    let weight = BiPolynomial::constant(h + int(i64::from(inner_level)));
    let x = BiPolynomial::x();
    let y = BiPolynomial::y();
    match rule {
        TraceRule::StarL1 => &(&x - &y) - &weight,
        TraceRule::StarL2 => &(&y.scale(&int(2)) - &x) + &weight,
        _ => unreachable!("only star rules carry a factor"),
    }
}

/// Reducer for one fixed `V(c,h)`.
pub struct ZhuReducer {
    params: VermaParams,
}

struct TraceBuilder<'a> {
    h: &'a Rational,
    index: HashMap<NegWord, usize>,
    steps: Vec<TraceStep>,
}

impl TraceBuilder<'_> {
    fn reduce(&mut self, word: &[u32]) -> usize {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let (rule, children, result) = match word.split_first() {
            None => (TraceRule::Vacuum, Vec::new(), BiPolynomial::one()),
            Some((&m, rest)) if m >= 3 => {
                let mut w1 = vec![m - 1];
                w1.extend_from_slice(rest);
                let mut w2 = vec![m - 2];
                w2.extend_from_slice(rest);
                let a = self.reduce(&w1);
                let b = self.reduce(&w2);
                let result = &self.steps[a].result.scale(&int(-2)) - &self.steps[b].result;
                (TraceRule::Shift { m }, vec![a, b], result)
            }
            Some((&m, rest)) => {
                let rule = if m == 1 { TraceRule::StarL1 } else { TraceRule::StarL2 };
                let inner = self.reduce(rest);
                let factor = star_factor(&rule, self.h, rest.iter().sum());
                let result = &factor * &self.steps[inner].result;
                (rule, vec![inner], result)
            }
        };
        self.steps.push(TraceStep { word: word.to_vec(), rule, children, result });
        let i = self.steps.len() - 1;
        self.index.insert(word.to_vec(), i);
        i
    }
}

impl ZhuReducer {
    pub fn new(params: VermaParams) -> Self {
        ZhuReducer { params }
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    /// Reduces a combination of (not necessarily ordered) negative-mode words.
    pub fn reduce_words_traced(&self, words: &[(NegWord, Rational)]) -> Result<ReductionTrace, ZhuError> {
        if words.iter().any(|(w, _)| w.contains(&0)) {
            return Err(ZhuError::NonNegativeMode);
        }
        let mut builder = TraceBuilder { h: &self.params.h, index: HashMap::new(), steps: Vec::new() };
        let mut top = Vec::new();
        let mut output = BiPolynomial::zero();
        for (w, c) in words {
            if c.is_zero() {
                continue;
            }
            let i = builder.reduce(w);
            output = &output + &builder.steps[i].result.scale(c);
            top.push((i, c.clone()));
        }
        Ok(ReductionTrace { h: self.params.h.clone(), steps: builder.steps, top, output })
    }

    pub fn reduce_words(&self, words: &[(NegWord, Rational)]) -> Result<BiPolynomial, ZhuError> {
        Ok(self.reduce_words_traced(words)?.output)
    }

    pub fn reduce_traced(&self, e: &ModuleElement) -> Result<ReductionTrace, ZhuError> {
        if e.params() != &self.params {
            return Err(ZhuError::ParamsMismatch);
        }
        let words: Vec<(NegWord, Rational)> =
            e.terms().iter().map(|(p, c)| (p.parts().to_vec(), c.clone())).collect();
        self.reduce_words_traced(&words)
    }

    pub fn reduce(&self, e: &ModuleElement) -> Result<BiPolynomial, ZhuError> {
        Ok(self.reduce_traced(e)?.output)
    }
}

/// Image of `e` in `ℚ[x,y]`, using a reducer configured from `e` itself.
pub fn reduce_to_bipoly(e: &ModuleElement) -> BiPolynomial {
    ZhuReducer::new(e.params().clone()).reduce(e).expect("reducer built from the element's own parameters")
}

/// `x^m y^n ↦ (L(-2)+2L(-1)+L(0))^m (L(-2)+L(-1))^n v` as a word combination;
/// handy for checking that reduction inverts the standard isomorphism.
pub fn standard_preimage(params: &VermaParams, m: u32, n: u32) -> Vec<(NegWord, Rational)> {
    let mut words: Vec<(NegWord, Rational)> = vec![(Vec::new(), Rational::one())];
    let apply = |words: &mut Vec<(NegWord, Rational)>, with_l0: bool| {
        let mut next = Vec::new();
        for (w, c) in words.iter() {
            let level: u32 = w.iter().sum();
            let mut w2 = vec![2];
            w2.extend_from_slice(w);
            next.push((w2, c.clone()));
            let mut w1 = vec![1];
            w1.extend_from_slice(w);
            next.push((w1, if with_l0 { c * int(2) } else { c.clone() }));
            if with_l0 {
                next.push((w.clone(), c * (&params.h + int(i64::from(level)))));
            }
        }
        *words = next;
    };
    for _ in 0..n {
        apply(&mut words, false);
    }
    for _ in 0..m {
        apply(&mut words, true);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::frac;
    use crate::virasoro::{Partition, VermaModule};

    fn reducer(h: Rational) -> ZhuReducer {
        ZhuReducer::new(VermaParams::new(int(1), h))
    }

    #[test]
    fn small_words() {
        let h = frac(3, 4);
        let r = reducer(h.clone());
        let hpoly = BiPolynomial::constant(h.clone());
        assert_eq!(r.reduce_words(&[(vec![], int(1))]).unwrap(), BiPolynomial::one());
        assert_eq!(
            r.reduce_words(&[(vec![2], int(1)), (vec![1], int(1))]).unwrap(),
            BiPolynomial::y()
        );
        let l1 = &(&BiPolynomial::x() - &BiPolynomial::y()) - &hpoly;
        assert_eq!(r.reduce_words(&[(vec![1], int(1))]).unwrap(), l1);
        let l3 = &(&BiPolynomial::x() - &BiPolynomial::y().scale(&int(3))) - &hpoly;
        assert_eq!(r.reduce_words(&[(vec![3], int(1))]).unwrap(), l3);
    }

    #[test]
    fn standard_isomorphism_roundtrip() {
        let params = VermaParams::new(int(1), frac(5, 3));
        let r = ZhuReducer::new(params.clone());
        for m in 0..3 {
            for n in 0..3 {
                let p = r.reduce_words(&standard_preimage(&params, m, n)).unwrap();
                assert_eq!(p, BiPolynomial::monomial(m, n, int(1)), "x^{m} y^{n}");
            }
        }
    }

    #[test]
    fn params_mismatch() {
        let r = reducer(int(1));
        let e = ModuleElement::vacuum(VermaParams::ints(1, 4));
        assert_eq!(r.reduce(&e), Err(ZhuError::ParamsMismatch));
    }

    #[test]
    fn trace_replays() {
        let params = VermaParams::ints(1, 1);
        let module = VermaModule::new(params.clone());
        let e = module.apply_modes(&[-1, -3, -2], &ModuleElement::vacuum(params.clone()));
        let r = ZhuReducer::new(params);
        let trace = r.reduce_traced(&e).unwrap();
        assert_eq!(trace.replay(), Some(trace.output.clone()));
        let mut broken = trace.clone();
        let last = broken.steps.len() - 1;
        broken.steps[last].result = BiPolynomial::constant(int(42));
        assert_eq!(broken.replay(), None);
    }

    #[test]
    fn pbw_reordering_is_invisible() {
        // L(-1)L(-2)v and its PBW form L(-2)L(-1)v + L(-3)v must agree.
        let params = VermaParams::new(int(1), frac(1, 3));
        let r = ZhuReducer::new(params.clone());
        let direct = r.reduce_words(&[(vec![1, 2], int(1))]).unwrap();
        let pbw = r
            .reduce(
                &ModuleElement::from_terms(
                    params,
                    3,
                    [
                        (Partition::new(vec![2, 1]).unwrap(), int(1)),
                        (Partition::new(vec![3]).unwrap(), int(1)),
                    ],
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(direct, pbw);
    }
}
