use std::collections::HashMap;

use rayon::prelude::*;

use super::{AmbientOperators, Form, FormSpace};
use crate::cdga::Element;
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{parity_sign, Rational, SVec};
use crate::sym_coalgebra::{SymContext, WordMap};

/// How a rational word `w = e_1⋯e_p` with `e_r = s(a_r x_{k_r})` factors
/// through its generator word `g_{k_1}⋯g_{k_p}`: for a form of degree `F`,
/// `f(w) = sign · (-1)^{F a_deg} · a_prod · f(pure)`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub pure: usize,
    pub sign: i32,
    pub a_deg: i64,
    pub a_prod: Element,
}

/// `None` when the generator word or the coefficient product vanishes.
pub fn project_word(ctx: &SymContext, gens: &[u32]) -> Option<Projection> {
    let alg = ctx.module().algebra();
    let mut sign = 1;
    let mut a_deg = 0;
    let mut prefix = 0;
    let mut a_prod = alg.one();
    let mut seq = Vec::with_capacity(gens.len());
    for &g in gens {
        let sg = ctx.gen(g as usize);
        let ad = alg.degree(sg.a);
        let p = ctx.pure_gen(sg.x);
        sign *= parity_sign(ad) * parity_sign(ad * prefix);
        a_deg += ad;
        prefix += ctx.gen(p).degree;
        a_prod = alg.mul(&a_prod, &alg.basis_element(sg.a));
        seq.push(p as u32);
    }
    let (s, pure) = ctx.normalize(&seq)?;
    if a_prod.iter().all(Rational::is_zero) {
        return None;
    }
    Some(Projection { pure, sign: sign * s, a_deg, a_prod })
}

/// Forms supported on generator words: the A-multilinear forms `Sym_A(sL, A)`.
#[derive(Debug)]
pub struct DescendedSpace {
    pure_words: Vec<usize>,
    pure_index: HashMap<usize, usize>,
    proj: Vec<Option<Projection>>,
    fibers: Vec<Vec<usize>>,
    dim_a: usize,
}

/// A failure of A-multilinearity: `f((a·g)·rest) ≠ ± a f(g·rest)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearityWitness {
    pub word: usize,
    pub slot: usize,
    pub a: usize,
}

impl DescendedSpace {
    pub fn new(space: &FormSpace) -> Self {
        let ctx = space.ctx();
        let alg = space.algebra();
        let unit = alg.unit();
        let pure_words: Vec<usize> = (0..ctx.num_words())
            .filter(|&w| ctx.word(w).gens.iter().all(|&g| ctx.gen(g as usize).a == unit))
            .collect();
        let pure_index: HashMap<usize, usize> = pure_words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut fibers = vec![Vec::new(); pure_words.len()];
        let proj: Vec<Option<Projection>> = (0..ctx.num_words())
            .map(|w| {
                let p = project_word(ctx, &ctx.word(w).gens)?;
                fibers[pure_index[&p.pure]].push(w);
                Some(p)
            })
            .collect();
        DescendedSpace { pure_words, pure_index, proj, fibers, dim_a: space.dim_a() }
    }

    pub fn dim(&self) -> usize {
        self.pure_words.len() * self.dim_a
    }

    pub fn pure_words(&self) -> &[usize] {
        &self.pure_words
    }

    pub fn index(&self, pure_word: usize, a: usize) -> Option<usize> {
        self.pure_index.get(&pure_word).map(|p| p * self.dim_a + a)
    }

    /// `(word, a)` of a descended basis index.
    pub fn split(&self, i: usize) -> (usize, usize) {
        (self.pure_words[i / self.dim_a], i % self.dim_a)
    }

    pub fn degree(&self, space: &FormSpace, i: usize) -> i64 {
        let (w, a) = self.split(i);
        space.degree(space.index(w, a))
    }

    pub fn word_len(&self, space: &FormSpace, i: usize) -> usize {
        space.ctx().word(self.split(i).0).len()
    }

    /// The unique A-multilinear form with the given values on generator words.
    pub fn lift(&self, space: &FormSpace, f: &SVec) -> Form {
        let alg = space.algebra();
        let mut out = Form::new();
        for (&i, c) in f {
            let (v, a) = self.split(i);
            let fdeg = self.degree(space, i);
            for &w in &self.fibers[self.pure_index[&v]] {
                let p = self.proj[w].as_ref().expect("fiber words project");
                let s = Rational::sign(p.sign * parity_sign(fdeg * p.a_deg));
                let val = alg.mul(&p.a_prod, &alg.basis_element(a));
                space.add_value(&mut out, w, &val, &(c * &s));
            }
        }
        out
    }

    pub fn restrict(&self, space: &FormSpace, f: &Form) -> SVec {
        let mut out = SVec::new();
        for (&i, c) in f {
            let (w, a) = space.split(i);
            if let Some(k) = self.index(w, a) {
                add_entry(&mut out, k, c);
            }
        }
        out
    }

    pub fn lift_basis(&self, space: &FormSpace, i: usize) -> Form {
        self.lift(space, &[(i, Rational::one())].into_iter().collect())
    }

    /// Whether `f` equals the lift of its restriction.
    pub fn is_descended(&self, space: &FormSpace, f: &Form) -> bool {
        self.lift(space, &self.restrict(space, f)) == *f
    }
}

/// Checks `f((a·g)·rest) = (-1)^{|a||f|} a f(g·rest)` for every generator
/// `g`, word `rest` and basis element `a`, returning the first failure.
pub fn is_a_multilinear(space: &FormSpace, f: &Form) -> Result<(), MultilinearityWitness> {
    let ctx = space.ctx();
    let alg = space.algebra();
    let module = ctx.module();
    for (fdeg, comp) in space.components(f) {
        let mut lens = vec![false; ctx.max_len() + 1];
        for &i in comp.keys() {
            lens[space.word_len(i)] = true;
        }
        for len in 1..=ctx.max_len() {
            if !lens[len] {
                continue;
            }
            for &rest in ctx.words_of_len(len - 1) {
                for g in 0..ctx.gens().len() {
                    let l = ctx.gen(g).l_index;
                    let e: SVec = [(l, Rational::one())].into_iter().collect();
                    let gw = ctx.mul_gen(g, rest);
                    let base = match gw {
                        Some((s, w)) => {
                            let mut v = space.value(&comp, w);
                            v.iter_mut().for_each(|x| *x *= &Rational::sign(s));
                            v
                        }
                        None => alg.zero(),
                    };
                    for m in 0..alg.dim() {
                        let am = alg.degree(m);
                        let mut lhs = alg.zero();
                        let s_act = Rational::sign(parity_sign(am));
                        for (l2, c) in module.act(m, &e) {
                            let g2 = ctx.gen_of_l(l2);
                            if let Some((s, w)) = ctx.mul_gen(g2, rest) {
                                let val = space.value(&comp, w);
                                let k = &(&c * &s_act) * &Rational::sign(s);
                                for (x, y) in lhs.iter_mut().zip(val) {
                                    *x += &k * &y;
                                }
                            }
                        }
                        let mut rhs = alg.mul_left_basis(m, &base);
                        let s = Rational::sign(parity_sign(am * fdeg));
                        rhs.iter_mut().for_each(|x| *x *= &s);
                        if lhs != rhs {
                            let word = gw.map(|(_, w)| w).unwrap_or(rest);
                            return Err(MultilinearityWitness { word, slot: g, a: m });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Outcome of checking that `D_j` preserves A-multilinearity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub level: usize,
    /// First descended basis form whose image is not A-multilinear.
    pub failure: Option<(usize, MultilinearityWitness)>,
    pub bracket_summand: Option<(usize, MultilinearityWitness)>,
    pub twisting_summand: Option<(usize, MultilinearityWitness)>,
}

impl DescentReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

fn first_failure(space: &FormSpace, desc: &DescendedSpace, op: &WordMap, lifts: &[Form]) -> Option<(usize, MultilinearityWitness)> {
    let found: Vec<Option<(usize, MultilinearityWitness)>> = lifts
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let img = op.apply(f);
            if desc.is_descended(space, &img) {
                return None;
            }
            Some((i, is_a_multilinear(space, &img).err().unwrap_or(MultilinearityWitness { word: 0, slot: 0, a: 0 })))
        })
        .collect();
    found.into_iter().flatten().next()
}

/// Verifies that every `D_j` maps lifted descended basis forms to
/// A-multilinear forms, and records whether each summand does so alone.
pub fn descent_check(space: &FormSpace, desc: &DescendedSpace, ops: &AmbientOperators) -> Vec<DescentReport> {
    let w = space.ctx().max_len();
    let lifts: Vec<Form> = (0..desc.dim()).map(|i| desc.lift_basis(space, i)).collect();
    (0..=w)
        .map(|j| {
            let usable: Vec<Form> = lifts
                .iter()
                .enumerate()
                .map(|(i, f)| if desc.word_len(space, i) + j <= w { f.clone() } else { Form::new() })
                .collect();
            let failure = first_failure(space, desc, &ops.d[j], &usable);
            let (bracket_summand, twisting_summand) = if j == 0 {
                (None, None)
            } else {
                (first_failure(space, desc, &ops.bra[j], &usable), first_failure(space, desc, &ops.t[j], &usable))
            };
            DescentReport { level: j, failure, bracket_summand, twisting_summand }
        })
        .collect()
}

/// A nonzero value of `Σ_{k=0}^{j} D_k D_{j-k}` on an input form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareResidual {
    pub level: usize,
    pub input: usize,
    pub value: Form,
}

/// Evaluates `Σ_{k=0}^{j} D_k D_{j-k}` on each input for `0 ≤ j ≤ W`.
pub fn square_check(ops: &AmbientOperators, inputs: &[Form]) -> Vec<SquareResidual> {
    let n = ops.d.len();
    (0..n)
        .flat_map(|j| {
            let found: Vec<SquareResidual> = inputs
                .par_iter()
                .enumerate()
                .filter_map(|(i, f)| {
                    let mut acc = Form::new();
                    for k in 0..=j {
                        let inner = ops.d[j - k].apply(f);
                        crate::graded_core::linalg::svec_add_scaled(&mut acc, &ops.d[k].apply(&inner), &Rational::one());
                    }
                    (!acc.is_empty()).then_some(SquareResidual { level: j, input: i, value: acc })
                })
                .collect();
            found
        })
        .collect()
}

/// All basis forms of the ambient space.
pub fn ambient_basis(space: &FormSpace) -> Vec<Form> {
    (0..space.dim()).map(|i| [(i, Rational::one())].into_iter().collect()).collect()
}

/// A basis form on which `D_j` fails to shift `(length, degree)` by `(j, -1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradeViolation {
    pub level: usize,
    pub form: usize,
    pub image: usize,
}

/// Checks that `D_j` maps bidegree `(p, q)` to `(p + j, q - j + 1)`, with
/// `p` the word length and `p + q` the upper total degree.
pub fn bigrade_check(space: &FormSpace, ops: &AmbientOperators) -> Vec<BigradeViolation> {
    let mut out = Vec::new();
    for (j, op) in ops.d.iter().enumerate() {
        for (i, col) in op.cols.iter().enumerate() {
            let (p, n) = (space.word_len(i) as i64, -space.degree(i));
            for &k in col.keys() {
                let (p2, n2) = (space.word_len(k) as i64, -space.degree(k));
                if p2 != p + j as i64 || (n2 - p2) != (n - p) - j as i64 + 1 {
                    out.push(BigradeViolation { level: j, form: i, image: k });
                }
            }
        }
    }
    out
}
