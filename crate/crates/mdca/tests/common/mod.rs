//! Helpers shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mdca::graded_core::{Rational, SVec};
use mdca::sym_coalgebra::{Brackets, SymContext};
use mdca::structures::ShLieRinehartData;
use rand::Rng;

fn pure_words(data: &ShLieRinehartData, len: usize) -> Vec<usize> {
    let ctx = &data.ctx;
    let unit = ctx.module().algebra().unit();
    ctx.words_of_len(len)
        .iter()
        .copied()
        .filter(|&w| ctx.word(w).gens.iter().all(|&g| ctx.gen(g as usize).a == unit))
        .collect()
}

/// Adds ±1 to one admissible generator-level entry of `c_j` or `t_j` and
/// rebuilds the pair. Returns `None` when the drawn slot has no entry of
/// the right degree.
pub fn perturb<R: Rng>(data: &ShLieRinehartData, rng: &mut R) -> Option<ShLieRinehartData> {
    let ctx = &data.ctx;
    let (mut del, mut t) = data.generator_data();
    let c = Rational::from_int(if rng.gen_bool(0.5) { 1 } else { -1 });
    if rng.gen_bool(0.5) && ctx.max_len() >= 2 {
        let j = rng.gen_range(1..ctx.max_len());
        let words = pure_words(data, j + 1);
        let w = *words.get(rng.gen_range(0..words.len().max(1)))?;
        let deg = ctx.word(w).degree - 1;
        let unit = ctx.module().algebra().unit();
        let targets: Vec<usize> =
            (0..ctx.gens().len()).filter(|&g| ctx.gen(g).a == unit && ctx.gen(g).degree == deg).collect();
        let g = *targets.get(rng.gen_range(0..targets.len().max(1)))?;
        let mut v = del.get(j, w).cloned().unwrap_or_default();
        let e = v.entry(g).or_insert_with(Rational::zero);
        *e += &c;
        v.retain(|_, x| !x.is_zero());
        del.set(j, w, v);
    } else {
        let j = rng.gen_range(1..ctx.max_len());
        let words = pure_words(data, j);
        let w = *words.get(rng.gen_range(0..words.len().max(1)))?;
        let alg = ctx.module().algebra();
        let shift = ctx.word(w).degree - 1;
        let slots: Vec<(usize, usize)> = (0..alg.dim())
            .flat_map(|s| (0..alg.dim()).map(move |t| (t, s)))
            .filter(|&(t, s)| alg.degree(t) == alg.degree(s) + shift)
            .collect();
        let (tt, ss) = *slots.get(rng.gen_range(0..slots.len().max(1)))?;
        let mut m = match t.get(j, w) {
            Some(m) => m.clone(),
            None => mdca::graded_core::LinearMap::zero(alg.basis().clone(), alg.basis().clone(), shift),
        };
        m.add_to(tt, ss, &c).ok()?;
        t.set(j, w, m);
    }
    ShLieRinehartData::from_generators(ctx.clone(), &del, &t).ok()
}

/// Random brackets of every arity `2..=W` on canonical tuples.
pub fn random_brackets<R: Rng>(ctx: &SymContext, rng: &mut R) -> Vec<Brackets> {
    let l = ctx.module().qbasis();
    (2..=ctx.max_len())
        .map(|n| {
            let mut values = BTreeMap::new();
            for &w in ctx.words_of_len(n) {
                let xs: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
                let deg: i64 = xs.iter().map(|&x| l.degree(x)).sum::<i64>() + n as i64 - 2;
                let mut v = SVec::new();
                for t in l.in_degree(deg) {
                    if rng.gen_bool(0.4) {
                        let x: i64 = rng.gen_range(-3..=3);
                        if x != 0 {
                            v.insert(t, Rational::new(x, rng.gen_range(1..=3)));
                        }
                    }
                }
                if !v.is_empty() {
                    values.insert(xs, v);
                }
            }
            Brackets { arity: n, values }
        })
        .collect()
}
