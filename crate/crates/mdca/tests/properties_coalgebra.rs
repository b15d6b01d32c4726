//! Invariants of the symmetric coalgebra on sL: the diagonal, coderivations,
//! the word-length filtration and the bracket correspondence.

use std::collections::BTreeMap;
use std::sync::Arc;

mod common;

use common::random_brackets;
use mdca::cdga::ground_field;
use mdca::cli_io::catalog_instance;
use mdca::graded_core::{parity_sign, GradedBasis, Rational, SVec};
use mdca::sym_coalgebra::{
    brackets_from_coderivation, check_coalgebra_perturbation, coderivation_from_brackets, extend_coderivation,
    Brackets, ModuleSpec, SymContext,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog_module(name: &str) -> Arc<ModuleSpec> {
    catalog_instance(name).unwrap().unwrap().module
}

/// Generators of mixed parity over ℚ with `d a = b`.
fn mixed_module() -> Arc<ModuleSpec> {
    let alg = Arc::new(ground_field());
    let gens = Arc::new(GradedBasis::from_pairs([("a", 1), ("b", 0), ("c", 2), ("e", 1)]).unwrap());
    let probe = ModuleSpec::new(alg.clone(), gens.clone(), None).unwrap();
    let mut values = vec![SVec::new(); 4];
    values[0].insert(probe.index(0, 1), Rational::one());
    Arc::new(ModuleSpec::with_generator_diff(alg, gens, &values).unwrap())
}

fn contexts() -> Vec<Arc<SymContext>> {
    vec![
        Arc::new(SymContext::new(catalog_module("sl2"), 4).unwrap()),
        Arc::new(SymContext::new(catalog_module("exterior_pair"), 3).unwrap()),
        Arc::new(SymContext::new(mixed_module(), 4).unwrap()),
        Arc::new(SymContext::new(catalog_module("quasi_sample"), 3).unwrap()),
    ]
}

type Tensor2 = BTreeMap<(usize, usize), Rational>;
type Tensor3 = BTreeMap<(usize, usize, usize), Rational>;

fn add<K: Ord>(t: &mut BTreeMap<K, Rational>, k: K, v: Rational) {
    let e = t.entry(k).or_insert_with(Rational::zero);
    *e += v;
}

fn clean<K: Ord>(mut t: BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
    t.retain(|_, v| !v.is_zero());
    t
}

#[test]
fn diagonal_is_coassociative_and_cocommutative() {
    for ctx in contexts() {
        for w in 0..ctx.num_words() {
            let diag = ctx.diagonal(w);
            let mut left = Tensor3::new();
            let mut right = Tensor3::new();
            for (w1, w2, c) in diag {
                for (u1, u2, c2) in ctx.diagonal(*w1) {
                    add(&mut left, (*u1, *u2, *w2), c * c2);
                }
                for (v1, v2, c2) in ctx.diagonal(*w2) {
                    add(&mut right, (*w1, *v1, *v2), c * c2);
                }
                let s = Rational::sign(parity_sign(ctx.word(*w1).degree * ctx.word(*w2).degree));
                let swapped = ctx.coproduct_coeff(w, *w2, *w1).cloned().unwrap_or_else(Rational::zero);
                assert_eq!(swapped, c * &s, "cocommutativity on {}", ctx.word_label(w));
            }
            assert_eq!(clean(left), clean(right), "coassociativity on {}", ctx.word_label(w));
        }
    }
}

fn random_corestriction(ctx: &SymContext, j: usize, rng: &mut ChaCha8Rng) -> BTreeMap<usize, SVec> {
    let mut c = BTreeMap::new();
    for &w in ctx.words_of_len(j + 1) {
        let deg = ctx.word(w).degree - 1;
        let targets: Vec<usize> = (0..ctx.gens().len()).filter(|&g| ctx.gen(g).degree == deg).collect();
        let mut v = SVec::new();
        for g in targets {
            if rng.gen_bool(0.5) {
                let x: i64 = rng.gen_range(-2..=2);
                if x != 0 {
                    v.insert(g, Rational::from_int(x));
                }
            }
        }
        if !v.is_empty() {
            c.insert(w, v);
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn extensions_are_coderivations_and_respect_length(seed in any::<u64>(), which in 0usize..4) {
        let ctx = &contexts()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = rng.gen_range(1..ctx.max_len());
        let m = extend_coderivation(ctx, j, &random_corestriction(ctx, j, &mut rng));
        for w in 0..ctx.num_words() {
            for x in m.cols[w].keys() {
                prop_assert_eq!(ctx.word(*x).len() + j, ctx.word(w).len());
            }
            // Δ∂ = (∂ ⊗ 1 + 1 ⊗ ∂)Δ, with ∂ odd
            let mut lhs = Tensor2::new();
            for (x, c) in &m.cols[w] {
                for (u, v, k) in ctx.diagonal(*x) {
                    add(&mut lhs, (*u, *v), c * k);
                }
            }
            let mut rhs = Tensor2::new();
            for (u, v, k) in ctx.diagonal(w) {
                for (x, c) in &m.cols[*u] {
                    add(&mut rhs, (*x, *v), k * c);
                }
                let s = Rational::sign(parity_sign(ctx.word(*u).degree));
                for (y, c) in &m.cols[*v] {
                    add(&mut rhs, (*u, *y), &(k * c) * &s);
                }
            }
            prop_assert_eq!(clean(lhs), clean(rhs));
        }
    }

    #[test]
    fn differential_part_preserves_length(which in 0usize..4) {
        let ctx = &contexts()[which];
        let d0 = mdca::sym_coalgebra::Coderivation::new().part(ctx, 0);
        for w in 0..ctx.num_words() {
            for x in d0.cols[w].keys() {
                prop_assert_eq!(ctx.word(*x).len(), ctx.word(w).len());
            }
        }
    }

    #[test]
    fn brackets_round_trip_through_coderivations(seed in any::<u64>(), which in 0usize..4) {
        let ctx = &contexts()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let brackets = random_brackets(ctx, &mut rng);
        let del = coderivation_from_brackets(ctx, &brackets).unwrap();
        for b in &brackets {
            prop_assert_eq!(&brackets_from_coderivation(ctx, &del, b.arity).unwrap(), b);
        }
    }

    #[test]
    fn level_two_residual_is_the_jacobi_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = catalog_module("heisenberg");
        let ctx = SymContext::new(module.clone(), 3).unwrap();
        let n = module.rank();
        let mut table = vec![vec![SVec::new(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let x: i64 = rng.gen_range(-1..=1);
                    if x != 0 {
                        table[i][j].insert(k, Rational::from_int(x));
                        table[j][i].insert(k, Rational::from_int(-x));
                    }
                }
            }
        }
        let br = |u: &SVec, v: &SVec| -> SVec {
            let mut out = SVec::new();
            for (i, a) in u {
                for (j, b) in v {
                    for (k, c) in &table[*i][*j] {
                        add(&mut out, *k, &(a * b) * c);
                    }
                }
            }
            clean(out)
        };
        let mut b = Brackets { arity: 2, values: BTreeMap::new() };
        for &w in ctx.words_of_len(2) {
            let xs: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
            if !table[xs[0]][xs[1]].is_empty() {
                b.values.insert(xs.clone(), table[xs[0]][xs[1]].clone());
            }
        }
        let del = coderivation_from_brackets(&ctx, &[b]).unwrap();
        let residuals = check_coalgebra_perturbation(&ctx, &del);
        for &w in ctx.words_of_len(3) {
            let xs: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
            let e = |i: usize| -> SVec { [(xs[i], Rational::one())].into_iter().collect() };
            let mut jac = SVec::new();
            for (p, q, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                for (k, c) in br(&br(&e(p), &e(q)), &e(r)) {
                    add(&mut jac, k, c);
                }
            }
            let got: SVec = residuals
                .iter()
                .filter(|r| r.level == 2 && r.word == w)
                .flat_map(|r| r.value.iter())
                .filter(|(x, _)| ctx.word(**x).len() == 1)
                .map(|(x, c)| (ctx.gen(ctx.word(*x).gens[0] as usize).l_index, c.clone()))
                .collect();
            prop_assert_eq!(clean(got), clean(jac));
        }
    }
}
