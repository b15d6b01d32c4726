use std::collections::BTreeMap;
use std::sync::Arc;

use super::{AmbientOperators, DescendedSpace, Form, FormSpace};
use crate::graded_core::linalg::{svec_add_scaled, svec_scale};
use crate::graded_core::{parity_sign, Matrix, Rational, SVec};
use crate::sym_coalgebra::WordMap;

/// A multi derivation structure on `Sym_A(sL, A)` given by the values of each
/// `D_j` on A and on the dual basis 1-forms `g_k^*`.
#[derive(Debug, Clone)]
pub struct MdcaStructure {
    space: Arc<FormSpace>,
    desc: Arc<DescendedSpace>,
    /// `on_algebra[j][m] = D_j(a_m)`, a descended `j`-form.
    pub on_algebra: Vec<Vec<SVec>>,
    /// `on_duals[j][k] = D_j(g_k^*)`, a descended `(j+1)`-form.
    pub on_duals: Vec<Vec<SVec>>,
    ops: Vec<WordMap>,
}

impl PartialEq for MdcaStructure {
    fn eq(&self, other: &Self) -> bool {
        self.on_algebra == other.on_algebra && self.on_duals == other.on_duals
    }
}

/// A basis form on which the Leibniz rule `D(ab) = D(a)b + (-1)^{|a|} a D(b)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationFailure {
    pub level: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendedResidual {
    pub level: usize,
    pub form: usize,
    pub value: SVec,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("the total operator does not square to zero (level {0})")]
    NotSquareZero(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub degree: i64,
    pub dim: usize,
    pub betti: usize,
    /// Set at the window edges and where truncation at W may affect the rank.
    pub flagged: bool,
}

impl MdcaStructure {
    pub fn new(
        space: Arc<FormSpace>,
        desc: Arc<DescendedSpace>,
        on_algebra: Vec<Vec<SVec>>,
        on_duals: Vec<Vec<SVec>>,
    ) -> Self {
        let mut m = MdcaStructure { space, desc, on_algebra, on_duals, ops: Vec::new() };
        m.ops = (0..m.on_algebra.len()).map(|j| m.extend(j)).collect();
        m
    }

    /// Reads off the generator tables of ambient operators.
    pub fn from_operators(space: Arc<FormSpace>, desc: Arc<DescendedSpace>, ops: &AmbientOperators) -> Self {
        let alg = space.algebra();
        let ctx = space.ctx();
        let consts: Vec<Form> =
            (0..alg.dim()).map(|m| desc.lift_basis(&space, desc.index(ctx.unit_word(), m).unwrap())).collect();
        let duals: Vec<Form> = (0..ctx.module().rank())
            .map(|k| desc.lift_basis(&space, desc.index(ctx.gen_word(ctx.pure_gen(k)), alg.unit()).unwrap()))
            .collect();
        let on_algebra =
            ops.d.iter().map(|d| consts.iter().map(|f| desc.restrict(&space, &d.apply(f))).collect()).collect();
        let on_duals =
            ops.d.iter().map(|d| duals.iter().map(|f| desc.restrict(&space, &d.apply(f))).collect()).collect();
        MdcaStructure::new(space, desc, on_algebra, on_duals)
    }

    pub fn space(&self) -> &Arc<FormSpace> {
        &self.space
    }

    pub fn desc(&self) -> &Arc<DescendedSpace> {
        &self.desc
    }

    pub fn levels(&self) -> usize {
        self.on_algebra.len()
    }

    /// `D_j` on descended forms.
    pub fn op(&self, j: usize) -> &WordMap {
        &self.ops[j]
    }

    pub fn apply(&self, j: usize, f: &SVec) -> SVec {
        self.ops[j].apply(f)
    }

    fn embed(&self, f: &SVec) -> Form {
        f.iter()
            .map(|(&i, c)| {
                let (w, a) = self.desc.split(i);
                (self.space.index(w, a), c.clone())
            })
            .collect()
    }

    /// Cup product of descended forms.
    pub fn cup(&self, f: &SVec, g: &SVec) -> SVec {
        self.desc.restrict(&self.space, &self.space.cup(&self.embed(f), &self.embed(g)))
    }

    fn constant(&self, m: usize) -> SVec {
        let i = self.desc.index(self.space.ctx().unit_word(), m).unwrap();
        [(i, Rational::one())].into_iter().collect()
    }

    fn dual(&self, k: usize) -> SVec {
        let ctx = self.space.ctx();
        let i = self.desc.index(ctx.gen_word(ctx.pure_gen(k)), self.space.algebra().unit()).unwrap();
        [(i, Rational::one())].into_iter().collect()
    }

    /// Extends the level-`j` generator values to all descended basis forms
    /// by the Leibniz rule, writing `(v, a)` as `a ∪ g^*_{k1} ∪ … ∪ g^*_{kp}`
    /// divided by the value of the product on `v`.
    fn extend(&self, j: usize) -> WordMap {
        let ctx = self.space.ctx().clone();
        let alg = self.space.algebra();
        let unit = alg.unit();
        let mut cols = Vec::with_capacity(self.desc.dim());
        for i in 0..self.desc.dim() {
            let (v, a) = self.desc.split(i);
            let ks: Vec<usize> = ctx.word(v).gens.iter().map(|&g| ctx.gen(g as usize).x).collect();
            let duals: Vec<SVec> = ks.iter().map(|&k| self.dual(k)).collect();
            let mut phi = self.constant(unit);
            for d in &duals {
                phi = self.cup(&phi, d);
            }
            let lambda = phi.get(&self.desc.index(v, unit).unwrap()).cloned().expect("product of duals is nonzero on its word");
            let mut dphi = SVec::new();
            let mut prefix_deg = 0;
            for r in 0..ks.len() {
                let mut term = self.constant(unit);
                for (s, d) in duals.iter().enumerate() {
                    let factor = if s == r { &self.on_duals[j][ks[s]] } else { d };
                    term = self.cup(&term, factor);
                }
                svec_add_scaled(&mut dphi, &term, &Rational::sign(parity_sign(prefix_deg)));
                prefix_deg += -ctx.gen(ctx.pure_gen(ks[r])).degree;
            }
            let mut out = self.cup(&self.on_algebra[j][a], &phi);
            let sa = Rational::sign(parity_sign(alg.degree(a)));
            svec_add_scaled(&mut out, &self.cup(&self.constant(a), &dphi), &sa);
            cols.push(svec_scale(&out, &lambda.recip()));
        }
        WordMap { cols }
    }

    /// Leibniz rule of each `D_j` restricted to A.
    pub fn derivation_failures(&self) -> Vec<DerivationFailure> {
        let alg = self.space.algebra();
        let mut out = Vec::new();
        for j in 0..self.levels() {
            for m in 0..alg.dim() {
                for n in 0..alg.dim() {
                    let mut lhs = SVec::new();
                    for (k, c) in alg.mul_basis(m, n).iter().enumerate() {
                        svec_add_scaled(&mut lhs, &self.on_algebra[j][k], c);
                    }
                    let mut rhs = self.cup(&self.on_algebra[j][m], &self.constant(n));
                    let s = Rational::sign(parity_sign(alg.degree(m)));
                    svec_add_scaled(&mut rhs, &self.cup(&self.constant(m), &self.on_algebra[j][n]), &s);
                    if lhs != rhs {
                        out.push(DerivationFailure { level: j, pair: (m, n) });
                    }
                }
            }
        }
        out
    }

    /// `Σ_{k=0}^{j} D_k D_{j-k}` on every descended basis form.
    pub fn square_residuals(&self) -> Vec<DescendedResidual> {
        let mut out = Vec::new();
        let n = self.levels();
        for j in 0..n {
            for i in 0..self.desc.dim() {
                let f: SVec = [(i, Rational::one())].into_iter().collect();
                let mut acc = SVec::new();
                for k in 0..=j {
                    svec_add_scaled(&mut acc, &self.apply(k, &self.apply(j - k, &f)), &Rational::one());
                }
                if !acc.is_empty() {
                    out.push(DescendedResidual { level: j, form: i, value: acc });
                }
            }
        }
        out
    }

    /// The sum of all `D_j` on descended forms.
    pub fn total(&self) -> WordMap {
        let mut t = WordMap::zero(self.desc.dim());
        for op in &self.ops {
            t.add_scaled(op, &Rational::one());
        }
        t
    }

    /// Upper degree `|w| - |a|` of a descended basis form.
    pub fn upper_degree(&self, i: usize) -> i64 {
        -self.desc.degree(&self.space, i)
    }

    /// Betti numbers of the total operator on descended forms for upper
    /// degrees in `window`.
    pub fn cohomology_ranks(&self, window: (i64, i64)) -> Result<Vec<CohomologyEntry>, CohomologyError> {
        if let Some(r) = self.square_residuals().first() {
            return Err(CohomologyError::NotSquareZero(r.level));
        }
        let total = self.total();
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for i in 0..self.desc.dim() {
            by_deg.entry(self.upper_degree(i)).or_default().push(i);
        }
        let rank_from = |n: i64| -> usize {
            let (Some(src), Some(tgt)) = (by_deg.get(&n), by_deg.get(&(n + 1))) else { return 0 };
            let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(r, &i)| (i, r)).collect();
            let mut rows = vec![vec![Rational::zero(); src.len()]; tgt.len()];
            for (c, &i) in src.iter().enumerate() {
                for (t, x) in &total.cols[i] {
                    if let Some(&r) = pos.get(t) {
                        rows[r][c] = x.clone();
                    }
                }
            }
            Matrix::from_rows(rows).rank()
        };
        let flag_from = self.truncation_floor();
        let mut out = Vec::new();
        for n in window.0..=window.1 {
            let dim = by_deg.get(&n).map_or(0, |v| v.len());
            let betti = dim - rank_from(n) - rank_from(n - 1);
            let flagged = n == window.0 || n == window.1 || flag_from.is_some_and(|f| n + 1 >= f);
            out.push(CohomologyEntry { degree: n, dim, betti, flagged });
        }
        Ok(out)
    }

    /// Lowest upper degree a form of length at least W can have, if any
    /// such form exists; `i64::MIN` when no bound is available.
    fn truncation_floor(&self) -> Option<i64> {
        let ctx = self.space.ctx();
        let w = ctx.max_len();
        let has_long = self.desc.pure_words().iter().any(|&v| ctx.word(v).len() == w);
        if !has_long {
            return None;
        }
        let rank = ctx.module().rank();
        let min_gen = (0..rank).map(|k| ctx.gen(ctx.pure_gen(k)).degree).min().unwrap_or(0);
        if min_gen <= 0 {
            return Some(i64::MIN);
        }
        let alg = self.space.algebra();
        let amax = (0..alg.dim()).map(|m| alg.degree(m)).max().unwrap_or(0);
        Some(w as i64 * min_gen - amax)
    }
}

/// Betti numbers of `m` in the given window of upper degrees; refuses when
/// the total operator does not square to zero.
pub fn cohomology_ranks(m: &MdcaStructure, window: (i64, i64)) -> Result<Vec<CohomologyEntry>, CohomologyError> {
    m.cohomology_ranks(window)
}
