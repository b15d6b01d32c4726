use std::sync::Arc;

use super::ShLieRinehartData;
use crate::cdga::{exterior, AlgebraSpec, Element};
use crate::convolution::{DescendedSpace, FormSpace, MdcaStructure, TwistingCochain};
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{parity_sign, GradedBasis, LinearMap, Rational, SVec};
use crate::sym_coalgebra::{Coderivation, ModuleSpec, SymContext, WordError, WordMap};

/// A quasi Lie-Rinehart pair over `𝒜 = Λ[θ]` (θ of homological degree -1)
/// with `Q` free on degree 0 generators:
/// `d ξ_i = θ·Mξ_i`, `ξ_i(θ) = λ_i θ`, `[ξ_i, ξ_j]` in Q and the
/// ternary term `⟨ξ_i, ξ_j; θ⟩ = c_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiLieRinehartData {
    pub names: Vec<String>,
    /// `m[j][i]` is the coefficient of `ξ_j` in `Mξ_i`.
    pub m: Vec<Vec<Rational>>,
    pub lambda: Vec<Rational>,
    /// `bracket[i][j][k]` is the coefficient of `ξ_k` in `[ξ_i, ξ_j]`.
    pub bracket: Vec<Vec<Vec<Rational>>>,
    pub triple: Vec<Vec<Rational>>,
}

const THETA: usize = 1;

fn algebra() -> Arc<AlgebraSpec> {
    Arc::new(exterior(&["theta"], -1))
}

impl QuasiLieRinehartData {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// The module `𝒬 = 𝒜 ⊗ Q` with its differential.
    pub fn module(&self) -> Arc<ModuleSpec> {
        let alg = algebra();
        let n = self.rank();
        let gens = Arc::new(GradedBasis::from_pairs(self.names.iter().map(|s| (s.as_str(), 0))).expect("distinct names"));
        let probe = ModuleSpec::new(alg.clone(), gens.clone(), None).expect("zero differential");
        let values: Vec<SVec> = (0..n)
            .map(|i| {
                let mut v = SVec::new();
                for j in 0..n {
                    add_entry(&mut v, probe.index(THETA, j), &self.m[j][i]);
                }
                v
            })
            .collect();
        Arc::new(ModuleSpec::with_generator_diff(alg, gens, &values).expect("θ·Q has degree -1"))
    }

    fn pairing(&self, i: usize, a: &[Rational]) -> Element {
        let mut out = vec![Rational::zero(); 2];
        out[THETA] = &self.lambda[i] * &a[THETA];
        out
    }

    fn triple_on(&self, i: usize, j: usize, a: &[Rational]) -> Element {
        let mut out = vec![Rational::zero(); 2];
        out[0] = &self.triple[i][j] * &a[THETA];
        out
    }
}

/// The sh Lie-Rinehart pair of a quasi Lie-Rinehart pair: `t_1` is the
/// pairing, `t_2` the ternary term, `c_1` the bracket on Q.
pub fn quasi_to_sh(q: &QuasiLieRinehartData, max_len: usize) -> Result<ShLieRinehartData, WordError> {
    let ctx = Arc::new(SymContext::new(q.module(), max_len)?);
    let ab = ctx.module().algebra().basis().clone();
    let n = q.rank();
    let mut t = TwistingCochain::new();
    let mut del = Coderivation::new();
    for i in 0..n {
        let mut m = LinearMap::zero(ab.clone(), ab.clone(), 0);
        m.add_to(THETA, THETA, &q.lambda[i]).expect("degree 0");
        t.set(1, ctx.gen_word(ctx.pure_gen(i)), m);
        for j in i + 1..n {
            let Some((s, w)) = ctx.normalize(&[ctx.pure_gen(i) as u32, ctx.pure_gen(j) as u32]) else { continue };
            let s = Rational::sign(s);
            let mut m = LinearMap::zero(ab.clone(), ab.clone(), 1);
            m.add_to(0, THETA, &(&s * &q.triple[i][j])).expect("degree 1");
            t.set(2, w, m);
            let mut v = SVec::new();
            for k in 0..n {
                add_entry(&mut v, ctx.pure_gen(k), &(&s * &q.bracket[i][j][k]));
            }
            del.set(1, w, v);
        }
    }
    Ok(ShLieRinehartData::from_generators(ctx, &del, &t).expect("generator data have the right shape"))
}

/// Value coefficient of the alternating form supported on the pure word `v`
/// at a tuple of vectors in Q.
fn alt_eval(ctx: &SymContext, v: usize, args: &[Vec<Rational>]) -> Rational {
    fn rec(ctx: &SymContext, v: usize, args: &[Vec<Rational>], seq: &mut Vec<u32>, c: Rational, acc: &mut Rational) {
        if seq.len() == args.len() {
            if let Some((s, w)) = ctx.normalize(seq) {
                if w == v {
                    *acc += &(&c * &Rational::sign(s));
                }
            }
            return;
        }
        for (k, x) in args[seq.len()].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            seq.push(ctx.pure_gen(k) as u32);
            rec(ctx, v, args, seq, &c * x, acc);
            seq.pop();
        }
    }
    let mut acc = Rational::zero();
    rec(ctx, v, args, &mut Vec::new(), Rational::one(), &mut acc);
    acc
}

fn basis_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// `D_0, …, D_W` on `Alt_𝒜(Q, 𝒜)` from the explicit formulas
/// `(D_0 f)(ξ) = d f(ξ) - θ Σ_i f(…, Mξ_i, …)`,
/// `(-1)^{|f|}(D_1 f)(ξ_1…ξ_{p+1}) = Σ_j (-1)^{j-1} ξ_j(f(…ξ̂_j…)) + Σ_{j<k} (-1)^{j+k} f([ξ_j, ξ_k], …)`,
/// `(-1)^{q}(D_2 f)(ξ_1…ξ_{p+2}) = Σ_{j<k} (-1)^{j+k} ⟨ξ_j, ξ_k; f(…)⟩` for `f`
/// with values in `𝒜^q`; `|f|` is the total degree.
pub(crate) fn literal_operators(q: &QuasiLieRinehartData, space: &FormSpace, desc: &DescendedSpace) -> Vec<WordMap> {
    let ctx = space.ctx();
    let alg = space.algebra();
    let n = q.rank();
    let w_max = ctx.max_len();
    let qs = |w: usize| -> Vec<usize> { ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).x).collect() };
    let mvec = |i: usize| -> Vec<Rational> { (0..n).map(|j| q.m[j][i].clone()).collect() };
    let mut ops = vec![WordMap::zero(desc.dim()); w_max + 1];
    for i in 0..desc.dim() {
        let (v, a) = desc.split(i);
        let p = ctx.word(v).len();
        let fdeg = desc.degree(space, i);
        let ea = alg.basis_element(a);
        let value = |xs: &[Vec<Rational>]| -> Element {
            let c = alt_eval(ctx, v, xs);
            ea.iter().map(|x| x * &c).collect()
        };
        for (j, op) in ops.iter_mut().enumerate().take(3.min(w_max + 1)) {
            let len = p + j;
            if len > n {
                continue;
            }
            for &u in desc.pure_words().iter().filter(|&&u| ctx.word(u).len() == len) {
                let xs = qs(u);
                let args: Vec<Vec<Rational>> = xs.iter().map(|&x| basis_vec(n, x)).collect();
                let mut out = alg.zero();
                let mut add = |e: &Element, c: i32| {
                    for (o, y) in out.iter_mut().zip(e) {
                        *o += &(y * &Rational::sign(c));
                    }
                };
                match j {
                    0 => {
                        add(&alg.d(&value(&args)), 1);
                        for r in 0..len {
                            let mut a2 = args.clone();
                            a2[r] = mvec(xs[r]);
                            add(&alg.mul_left_basis(THETA, &value(&a2)), -1);
                        }
                    }
                    1 => {
                        let g = parity_sign(fdeg);
                        for r in 0..len {
                            let mut rest = args.clone();
                            rest.remove(r);
                            add(&q.pairing(xs[r], &value(&rest)), g * parity_sign(r as i64));
                        }
                        for r in 0..len {
                            for s in r + 1..len {
                                let mut rest = args.clone();
                                rest.remove(s);
                                rest.remove(r);
                                let br: Vec<Rational> = q.bracket[xs[r]][xs[s]].clone();
                                rest.insert(0, br);
                                add(&value(&rest), g * parity_sign((r + s) as i64));
                            }
                        }
                    }
                    _ => {
                        let g = parity_sign(alg.degree(a));
                        for r in 0..len {
                            for s in r + 1..len {
                                let mut rest = args.clone();
                                rest.remove(s);
                                rest.remove(r);
                                add(&q.triple_on(xs[r], xs[s], &value(&rest)), g * parity_sign((r + s) as i64));
                            }
                        }
                    }
                }
                for (b, c) in out.iter().enumerate() {
                    if !c.is_zero() {
                        add_entry(&mut op.cols[i], desc.index(u, b).expect("pure word"), c);
                    }
                }
            }
        }
    }
    ops
}

fn structure_from_ops(space: Arc<FormSpace>, desc: Arc<DescendedSpace>, ops: &[WordMap]) -> MdcaStructure {
    let ctx = space.ctx().clone();
    let alg = space.algebra();
    let on_algebra = ops
        .iter()
        .map(|op| (0..alg.dim()).map(|m| op.cols[desc.index(ctx.unit_word(), m).unwrap()].clone()).collect())
        .collect();
    let on_duals = ops
        .iter()
        .map(|op| {
            (0..ctx.module().rank())
                .map(|k| op.cols[desc.index(ctx.gen_word(ctx.pure_gen(k)), alg.unit()).unwrap()].clone())
                .collect()
        })
        .collect();
    MdcaStructure::new(space, desc, on_algebra, on_duals)
}

/// The multi derivation structure on `Alt_𝒜(Q, 𝒜)` from the explicit
/// formulas, with `Alt_𝒜(Q, 𝒜)` identified with forms on generator words.
pub fn build_quasi_mc(q: &QuasiLieRinehartData, max_len: usize) -> Result<MdcaStructure, WordError> {
    let ctx = Arc::new(SymContext::new(q.module(), max_len)?);
    let space = Arc::new(FormSpace::new(ctx));
    let desc = Arc::new(DescendedSpace::new(&space));
    let ops = literal_operators(q, &space, &desc);
    Ok(structure_from_ops(space, desc, &ops))
}

/// Explicit operators alongside the structure built from their generator
/// values, for comparing the two on every form.
pub fn quasi_literal_operators(q: &QuasiLieRinehartData, max_len: usize) -> Result<Vec<WordMap>, WordError> {
    let ctx = Arc::new(SymContext::new(q.module(), max_len)?);
    let space = FormSpace::new(ctx);
    let desc = DescendedSpace::new(&space);
    Ok(literal_operators(q, &space, &desc))
}

/// Comparison of `Σ_cyc [[ξ, η], ζ]` with the terms `[dξ, η, ζ]_3 + …`
/// on all basis triples of Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiDefectReport {
    /// The sign `s` with `Σ_cyc [[ξ, η], ζ] = s·(…)`, when some side is nonzero.
    pub sign: Option<i32>,
    /// Triples on which no single sign works.
    pub mismatches: Vec<(usize, usize, usize)>,
}

impl JacobiDefectReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn q_bracket(q: &QuasiLieRinehartData, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let n = q.rank();
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let c = &x[i] * &y[j];
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(&q.bracket[i][j]) {
                *o += &(&c * b);
            }
        }
    }
    out
}

/// `[x, y, θz]_3 = ⟨x, y; θ⟩ z`, moved into place by graded skew-symmetry.
fn ternary_with_d(q: &QuasiLieRinehartData, i: usize, j: usize, k: usize) -> Vec<Rational> {
    let n = q.rank();
    let mz = |z: usize| -> Vec<Rational> { (0..n).map(|r| q.m[r][z].clone()).collect() };
    let mut out = vec![Rational::zero(); n];
    // slot 1: [θMξ_i, ξ_j, ξ_k] = [ξ_j, ξ_k, θMξ_i]
    // slot 2: [ξ_i, θMξ_j, ξ_k] = -[ξ_i, ξ_k, θMξ_j]
    // slot 3: [ξ_i, ξ_j, θMξ_k]
    for (c, z) in [(q.triple[j][k].clone(), i), (-&q.triple[i][k], j), (q.triple[i][j].clone(), k)] {
        for (o, x) in out.iter_mut().zip(mz(z)) {
            *o += &(&c * &x);
        }
    }
    out
}

pub fn jacobi_defect_identity(q: &QuasiLieRinehartData) -> JacobiDefectReport {
    let n = q.rank();
    let e = |i: usize| basis_vec(n, i);
    let mut sign = None;
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut lhs = q_bracket(q, &q_bracket(q, &e(i), &e(j)), &e(k));
                for (o, x) in lhs.iter_mut().zip(q_bracket(q, &q_bracket(q, &e(j), &e(k)), &e(i))) {
                    *o += &x;
                }
                for (o, x) in lhs.iter_mut().zip(q_bracket(q, &q_bracket(q, &e(k), &e(i)), &e(j))) {
                    *o += &x;
                }
                let rhs = ternary_with_d(q, i, j, k);
                let neg: Vec<Rational> = rhs.iter().map(|x| -x).collect();
                let fits = |s: i32| if s > 0 { lhs == rhs } else { lhs == neg };
                match (fits(1), fits(-1)) {
                    (true, true) => {}
                    (true, false) | (false, true) => {
                        let s = if fits(1) { 1 } else { -1 };
                        match sign {
                            None => sign = Some(s),
                            Some(t) if t != s => mismatches.push((i, j, k)),
                            _ => {}
                        }
                    }
                    (false, false) => mismatches.push((i, j, k)),
                }
            }
        }
    }
    JacobiDefectReport { sign, mismatches }
}

/// Searches `M`, `λ` and the bracket of a rank-2 pair over `{-1, 0, 1}`
/// and solves the square-zero equations for `c = ⟨ξ, ζ; θ⟩`, returning the
/// first certified solution with `c ≠ 0` and `λ·b ≠ 0`.
pub fn solve_quasi_constraints(names: [&str; 2], max_len: usize) -> Option<QuasiLieRinehartData> {
    let base = QuasiLieRinehartData {
        names: names.iter().map(|s| s.to_string()).collect(),
        m: vec![vec![Rational::zero(); 2]; 2],
        lambda: vec![Rational::zero(); 2],
        bracket: vec![vec![vec![Rational::zero(); 2]; 2]; 2],
        triple: vec![vec![Rational::zero(); 2]; 2],
    };
    let ctx = Arc::new(SymContext::new(base.module(), max_len).ok()?);
    let space = FormSpace::new(ctx);
    let desc = DescendedSpace::new(&space);
    let vals = [-1i64, 0, 1];
    let residual = |q: &QuasiLieRinehartData| -> Vec<SVec> {
        let ops = literal_operators(q, &space, &desc);
        let mut out = Vec::new();
        for j in 0..ops.len() {
            let mut acc = WordMap::zero(desc.dim());
            for k in 0..=j {
                acc.add_scaled(&ops[k].compose(&ops[j - k]), &Rational::one());
            }
            out.extend(acc.cols);
        }
        out
    };
    for code in 0..3usize.pow(8) {
        let digit = |d: usize| Rational::from_int(vals[code / 3usize.pow(d as u32) % 3]);
        let mut q = base.clone();
        q.m = vec![vec![digit(0), digit(1)], vec![digit(2), digit(3)]];
        q.lambda = vec![digit(4), digit(5)];
        let b = [digit(6), digit(7)];
        if (&(&q.lambda[0] * &b[0]) + &(&q.lambda[1] * &b[1])).is_zero() {
            continue;
        }
        q.bracket[0][1] = b.to_vec();
        q.bracket[1][0] = b.iter().map(|x| -x).collect();
        let r0 = residual(&q);
        let mut q1 = q.clone();
        q1.triple = vec![vec![Rational::zero(), Rational::one()], vec![-Rational::one(), Rational::zero()]];
        let r1 = residual(&q1);
        let mut c: Option<Rational> = None;
        let mut ok = true;
        for (x0, x1) in r0.iter().zip(&r1) {
            let keys: std::collections::BTreeSet<usize> = x0.keys().chain(x1.keys()).copied().collect();
            for key in keys {
                let a = x0.get(&key).cloned().unwrap_or_else(Rational::zero);
                let b1 = x1.get(&key).cloned().unwrap_or_else(Rational::zero);
                let delta = &b1 - &a;
                if delta.is_zero() {
                    ok &= a.is_zero();
                    continue;
                }
                let cand = -&(&a / &delta);
                match &c {
                    None => c = Some(cand),
                    Some(prev) => ok &= *prev == cand,
                }
            }
        }
        let c = c.unwrap_or_else(Rational::one);
        if !ok || c.is_zero() {
            continue;
        }
        q.triple = vec![vec![Rational::zero(), c.clone()], vec![-&c, Rational::zero()]];
        let m = build_quasi_mc(&q, max_len).ok()?;
        if m.square_residuals().is_empty() {
            return Some(q);
        }
    }
    None
}
