use std::collections::BTreeMap;

use super::SymContext;
use crate::graded_core::linalg::{add_entry, svec_add_scaled};
use crate::graded_core::{Rational, SVec};

/// A linear map on the words of a [`SymContext`]; `cols[w]` is the image of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordMap {
    pub cols: Vec<SVec>,
}

impl WordMap {
    pub fn zero(n: usize) -> Self {
        WordMap { cols: vec![SVec::new(); n] }
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&w, c) in v {
            svec_add_scaled(&mut out, &self.cols[w], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WordMap) -> WordMap {
        WordMap { cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &WordMap, c: &Rational) {
        for (a, b) in self.cols.iter_mut().zip(&other.cols) {
            svec_add_scaled(a, b, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Rows of the map: `rows[t]` lists `(s, c)` with `c` the `t`-entry of `cols[s]`.
    pub fn transpose(&self, targets: usize) -> Vec<Vec<(usize, Rational)>> {
        let mut rows = vec![Vec::new(); targets];
        for (s, col) in self.cols.iter().enumerate() {
            for (t, c) in col {
                rows[*t].push((s, c.clone()));
            }
        }
        rows
    }
}

/// Corestrictions `c_j : Σ^{j+1}[sL] → sL` of a coderivation, keyed by word
/// index; values are combinations of sL generators. The length-preserving
/// part comes from the module differential.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coderivation {
    pub corestrictions: BTreeMap<usize, BTreeMap<usize, SVec>>,
}

impl Coderivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, j: usize, word: usize, value: SVec) {
        let e = self.corestrictions.entry(j).or_default();
        if value.is_empty() {
            e.remove(&word);
        } else {
            e.insert(word, value);
        }
        if self.corestrictions.get(&j).is_some_and(|m| m.is_empty()) {
            self.corestrictions.remove(&j);
        }
    }

    pub fn get(&self, j: usize, word: usize) -> Option<&SVec> {
        self.corestrictions.get(&j).and_then(|m| m.get(&word))
    }

    pub fn max_level(&self) -> usize {
        self.corestrictions.iter().filter(|(_, m)| !m.is_empty()).map(|(j, _)| *j).max().unwrap_or(0)
    }

    /// The coderivation part lowering word length by `j`; `j = 0` is the
    /// extension of the differential of sL.
    pub fn part(&self, ctx: &SymContext, j: usize) -> WordMap {
        if j == 0 {
            return extend_coderivation(ctx, 0, &d0_corestriction(ctx));
        }
        match self.corestrictions.get(&j) {
            Some(c) => extend_coderivation(ctx, j, c),
            None => WordMap::zero(ctx.num_words()),
        }
    }
}

/// `s ξ ↦ -s(d_L ξ)` on length-one words.
pub fn d0_corestriction(ctx: &SymContext) -> BTreeMap<usize, SVec> {
    let module = ctx.module();
    let mut out = BTreeMap::new();
    for (g, sg) in ctx.gens().iter().enumerate() {
        let e: SVec = [(sg.l_index, Rational::one())].into_iter().collect();
        let mut v = SVec::new();
        for (l, c) in module.d(&e) {
            add_entry(&mut v, ctx.gen_of_l(l), &-c);
        }
        if !v.is_empty() {
            out.insert(ctx.gen_word(g), v);
        }
    }
    out
}

/// The unique coderivation with corestriction `c` on words of length `j + 1`.
pub fn extend_coderivation(ctx: &SymContext, j: usize, c: &BTreeMap<usize, SVec>) -> WordMap {
    let mut m = WordMap::zero(ctx.num_words());
    if c.is_empty() {
        return m;
    }
    for len in j + 1..=ctx.max_len() {
        for &w in ctx.words_of_len(len) {
            let mut out = SVec::new();
            for (w1, w2, k) in ctx.diagonal(w) {
                if ctx.word(*w1).len() != j + 1 {
                    continue;
                }
                if let Some(v) = c.get(w1) {
                    svec_add_scaled(&mut out, &ctx.mul_gens_vec(v, *w2), k);
                }
            }
            m.cols[w] = out;
        }
    }
    m
}

/// A nonzero value of the level-`level` perturbation identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationResidual {
    pub level: usize,
    pub word: usize,
    pub value: SVec,
}

/// Evaluates `d0 ∂^j + ∂^j d0 + Σ_{0<k<j} ∂^k ∂^{j-k}` on every word for
/// `1 ≤ j ≤ W - 1`; empty iff all vanish.
pub fn check_coalgebra_perturbation(ctx: &SymContext, del: &Coderivation) -> Vec<PerturbationResidual> {
    let w = ctx.max_len();
    let parts: Vec<WordMap> = (0..w).map(|j| del.part(ctx, j)).collect();
    let mut out = Vec::new();
    for j in 1..w {
        let mut r = parts[0].compose(&parts[j]);
        r.add_scaled(&parts[j].compose(&parts[0]), &Rational::one());
        for k in 1..j {
            r.add_scaled(&parts[k].compose(&parts[j - k]), &Rational::one());
        }
        for (word, value) in r.cols.into_iter().enumerate() {
            if !value.is_empty() {
                out.push(PerturbationResidual { level: j, word, value });
            }
        }
    }
    out
}
