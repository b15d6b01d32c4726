use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Form, FormSpace};
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{parity_sign, LinearMap, Rational};
use crate::sym_coalgebra::{Coderivation, WordMap};

/// Components `t_j` sending words of length `j` to degree `|w| - 1` maps on
/// A (derivations when the data are valid).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwistingCochain {
    pub components: BTreeMap<usize, BTreeMap<usize, LinearMap>>,
}

impl TwistingCochain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, j: usize, word: usize, value: LinearMap) {
        let e = self.components.entry(j).or_default();
        if value.is_zero() {
            e.remove(&word);
        } else {
            e.insert(word, value);
        }
        if self.components.get(&j).is_some_and(|m| m.is_empty()) {
            self.components.remove(&j);
        }
    }

    pub fn get(&self, j: usize, word: usize) -> Option<&LinearMap> {
        self.components.get(&j).and_then(|m| m.get(&word))
    }

    pub fn level(&self, j: usize) -> impl Iterator<Item = (&usize, &LinearMap)> {
        self.components.get(&j).into_iter().flat_map(|m| m.iter())
    }

    /// Drops empty levels so that equal cochains compare equal.
    pub fn normalized(mut self) -> Self {
        self.components.retain(|_, m| !m.is_empty());
        self
    }
}

fn build_cols(space: &FormSpace, f: impl Fn(usize) -> Form + Sync + Send) -> WordMap {
    WordMap { cols: (0..space.dim()).into_par_iter().map(f).collect() }
}

/// `φ ↦ sign(φ) · φ∘∂` as a matrix on basis forms, for a word map `∂`.
fn precompose(space: &FormSpace, part: &WordMap) -> WordMap {
    let ctx = space.ctx();
    let rows = part.transpose(ctx.num_words());
    build_cols(space, |i| {
        let (u, a) = space.split(i);
        let s = Rational::sign(parity_sign(space.degree(i) + 1));
        let mut out = Form::new();
        for (w, c) in &rows[u] {
            add_entry(&mut out, space.index(*w, a), &(c * &s));
        }
        out
    })
}

/// `D0(f) = d_A∘f + (-1)^{|f|+1} f∘d0`.
pub fn hom_differential_op(space: &FormSpace) -> WordMap {
    let a = space.algebra();
    let d0 = Coderivation::new().part(space.ctx(), 0);
    let mut m = precompose(space, &d0);
    for (i, col) in m.cols.iter_mut().enumerate() {
        let (w, ai) = space.split(i);
        let da = a.d(&a.basis_element(ai));
        space.add_value(col, w, &da, &Rational::one());
    }
    m
}

/// `∂^{[·,·]}_j(φ) = (-1)^{|φ|+1} φ∘∂^j`.
pub fn partial_bra_op(space: &FormSpace, del: &Coderivation, j: usize) -> WordMap {
    precompose(space, &del.part(space.ctx(), j))
}

/// `∂^{t_j}(f)(w) = Σ_{Δ(w), |w1| = j} (-1)^{|f||w1|} t_j(w1)(f(w2))`.
pub fn partial_t_op(space: &FormSpace, t: &TwistingCochain, j: usize) -> WordMap {
    let ctx = space.ctx();
    let comps: Vec<(usize, &LinearMap)> = t.level(j).map(|(w, m)| (*w, m)).collect();
    build_cols(space, |i| {
        let (u, a) = space.split(i);
        let fdeg = space.degree(i);
        let mut out = Form::new();
        for &(w1, tm) in &comps {
            let Some((_, w)) = ctx.mul_words(w1, u) else { continue };
            let Some(k) = ctx.coproduct_coeff(w, w1, u) else { continue };
            let s = Rational::sign(parity_sign(fdeg * ctx.word(w1).degree));
            let c = k * &s;
            space.add_value(&mut out, w, &tm.column(a), &c);
        }
        out
    })
}

/// `D_j = ∂^{[·,·]}_j + ∂^{t_j}` for `j ≥ 1`, and `D_0` for `j = 0`.
pub fn build_d(space: &FormSpace, del: &Coderivation, t: &TwistingCochain, j: usize) -> WordMap {
    if j == 0 {
        return hom_differential_op(space);
    }
    let mut m = partial_bra_op(space, del, j);
    m.add_scaled(&partial_t_op(space, t, j), &Rational::one());
    m
}

pub fn hom_differential(space: &FormSpace, f: &Form) -> Form {
    hom_differential_op(space).apply(f)
}

pub fn partial_bra(space: &FormSpace, f: &Form, del: &Coderivation, j: usize) -> Form {
    partial_bra_op(space, del, j).apply(f)
}

pub fn partial_t(space: &FormSpace, f: &Form, t: &TwistingCochain, j: usize) -> Form {
    partial_t_op(space, t, j).apply(f)
}

/// The operators `D_0, …, D_W` of a structure on the ambient form space.
#[derive(Debug, Clone)]
pub struct AmbientOperators {
    pub d: Vec<WordMap>,
    pub bra: Vec<WordMap>,
    pub t: Vec<WordMap>,
}

impl AmbientOperators {
    pub fn build(space: &FormSpace, del: &Coderivation, t: &TwistingCochain) -> Self {
        let w = space.ctx().max_len();
        let zero = WordMap::zero(space.dim());
        let mut d = vec![hom_differential_op(space)];
        let mut bra = vec![zero.clone()];
        let mut tt = vec![zero];
        for j in 1..=w {
            let b = partial_bra_op(space, del, j);
            let p = partial_t_op(space, t, j);
            let mut s = b.clone();
            s.add_scaled(&p, &Rational::one());
            d.push(s);
            bra.push(b);
            tt.push(p);
        }
        AmbientOperators { d, bra, t: tt }
    }
}
