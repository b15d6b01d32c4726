use std::collections::BTreeMap;

use super::{Coderivation, SymContext};
use crate::graded_core::linalg::{add_entry, svec_add_scaled};
use crate::graded_core::{koszul_sign, parity_sign, Rational, SVec};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("arity {n} outside 2..={max}")]
    OutOfRange { n: usize, max: usize },
}

/// An n-ary bracket on L given on canonical tuples (L basis indices ordered
/// like their suspensions); values are over the rational basis of L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brackets {
    pub arity: usize,
    pub values: BTreeMap<Vec<usize>, SVec>,
}

/// `(-1)^{Σ_i (n-i)|x_i|}`, the sign of `s^{⊗n}`.
pub fn suspension_sign(degs: &[i64]) -> i32 {
    let n = degs.len() as i64;
    parity_sign(degs.iter().enumerate().map(|(i, d)| (n - 1 - i as i64) * d).sum())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

impl Brackets {
    /// The bracket on an arbitrary tuple, using graded skew-symmetry.
    pub fn eval(&self, ctx: &SymContext, xs: &[usize]) -> SVec {
        let l = ctx.module().qbasis();
        let seq: Vec<u32> = xs.iter().map(|&x| ctx.gen_of_l(x) as u32).collect();
        let Some((k, w)) = ctx.normalize(&seq) else { return SVec::new() };
        let canon: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
        let Some(v) = self.values.get(&canon) else { return SVec::new() };
        let d1: Vec<i64> = xs.iter().map(|&x| l.degree(x)).collect();
        let d2: Vec<i64> = canon.iter().map(|&x| l.degree(x)).collect();
        let s = suspension_sign(&d1) * k * suspension_sign(&d2);
        v.iter().map(|(i, c)| (*i, c * &Rational::sign(s))).collect()
    }
}

/// `[x1..xn] = τ ∂^{n-1} mult sym s^{⊗n}(x1 ⊗ … ⊗ xn)`.
pub fn brackets_from_coderivation(ctx: &SymContext, del: &Coderivation, n: usize) -> Result<Brackets, BracketError> {
    if n < 2 || n > ctx.max_len() {
        return Err(BracketError::OutOfRange { n, max: ctx.max_len() });
    }
    let l = ctx.module().qbasis();
    let perms = permutations(n);
    let nfact = Rational::from_int(perms.len() as i64);
    let mut values = BTreeMap::new();
    for &w in ctx.words_of_len(n) {
        let gens = &ctx.word(w).gens;
        let xs: Vec<usize> = gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
        let ldeg: Vec<i64> = xs.iter().map(|&x| l.degree(x)).collect();
        let sdeg: Vec<i64> = gens.iter().map(|&g| ctx.gen(g as usize).degree).collect();
        let ss = Rational::sign(suspension_sign(&ldeg));
        let mut sym = SVec::new();
        for p in &perms {
            // p[i] is the new position of factor i
            let mut seq = vec![0u32; n];
            for (i, &pi) in p.iter().enumerate() {
                seq[pi] = gens[i];
            }
            let eps = koszul_sign(p, &sdeg).expect("valid permutation");
            if let Some((s, u)) = ctx.normalize(&seq) {
                add_entry(&mut sym, u, &(&ss * &Rational::sign(eps * s) / &nfact));
            }
        }
        let mut val = SVec::new();
        for (u, c) in &sym {
            if let Some(v) = del.get(n - 1, *u) {
                for (g, x) in v {
                    add_entry(&mut val, ctx.gen(*g).l_index, &(c * x));
                }
            }
        }
        if !val.is_empty() {
            values.insert(xs, val);
        }
    }
    Ok(Brackets { arity: n, values })
}

/// Inverse of [`brackets_from_coderivation`] over all supplied arities.
pub fn coderivation_from_brackets(ctx: &SymContext, brackets: &[Brackets]) -> Result<Coderivation, BracketError> {
    let l = ctx.module().qbasis();
    let mut del = Coderivation::new();
    for b in brackets {
        let n = b.arity;
        if n < 2 || n > ctx.max_len() {
            return Err(BracketError::OutOfRange { n, max: ctx.max_len() });
        }
        for &w in ctx.words_of_len(n) {
            let xs: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
            let Some(v) = b.values.get(&xs) else { continue };
            let ldeg: Vec<i64> = xs.iter().map(|&x| l.degree(x)).collect();
            let s = Rational::sign(suspension_sign(&ldeg));
            let mut out = SVec::new();
            for (x, c) in v {
                add_entry(&mut out, ctx.gen_of_l(*x), c);
            }
            let mut scaled = SVec::new();
            svec_add_scaled(&mut scaled, &out, &s);
            del.set(n - 1, w, scaled);
        }
    }
    Ok(del)
}
