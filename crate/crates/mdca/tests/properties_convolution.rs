//! Invariants of the convolution algebra: the cup product, the operators
//! `D_j` as cup derivations, and the bracket-pairing identity for twisting
//! residuals.

use std::sync::Arc;

use mdca::cdga::derivation_space;
use mdca::cli_io::{catalog_instance, sh_data};
use mdca::convolution::{AmbientOperators, Form, FormSpace};
use mdca::graded_core::linalg::svec_add_scaled;
use mdca::graded_core::{parity_sign, LinearMap, Rational};
use mdca::structures::ShLieRinehartData;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURES: [&str; 3] = ["sl2", "exterior_pair", "quasi_sample"];

fn data(name: &str, w: usize) -> ShLieRinehartData {
    sh_data(&catalog_instance(name).unwrap().unwrap(), w).unwrap()
}

fn random_form(space: &FormSpace, deg: i64, rng: &mut ChaCha8Rng) -> Form {
    let mut f = Form::new();
    for i in (0..space.dim()).filter(|&i| space.degree(i) == deg) {
        if rng.gen_bool(0.3) {
            let x: i64 = rng.gen_range(-3..=3);
            if x != 0 {
                f.insert(i, Rational::from_int(x));
            }
        }
    }
    f
}

fn random_degree(space: &FormSpace, rng: &mut ChaCha8Rng) -> i64 {
    space.degree(rng.gen_range(0..space.dim()))
}

fn sum(a: &Form, b: &Form, c: &Rational) -> Form {
    let mut out = a.clone();
    svec_add_scaled(&mut out, b, c);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cup_is_unital_associative_and_graded_commutative(seed in any::<u64>(), which in 0usize..3) {
        let space = FormSpace::new(data(FIXTURES[which], 3).ctx.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degs: Vec<i64> = (0..3).map(|_| random_degree(&space, &mut rng)).collect();
        let (f, g, h) = (
            random_form(&space, degs[0], &mut rng),
            random_form(&space, degs[1], &mut rng),
            random_form(&space, degs[2], &mut rng),
        );
        let one = space.constant(&space.algebra().one());
        prop_assert_eq!(space.cup(&one, &f), f.clone());
        prop_assert_eq!(space.cup(&f, &one), f.clone());
        prop_assert_eq!(space.cup(&space.cup(&f, &g), &h), space.cup(&f, &space.cup(&g, &h)));
        let s = Rational::sign(parity_sign(degs[0] * degs[1]));
        let gf: Form = space.cup(&g, &f).into_iter().map(|(i, c)| (i, c * &s)).collect();
        prop_assert_eq!(space.cup(&f, &g), gf);
    }

    #[test]
    fn operators_are_cup_derivations(seed in any::<u64>(), which in 0usize..3) {
        let d = data(FIXTURES[which], 3);
        let space = FormSpace::new(d.ctx.clone());
        let ops = AmbientOperators::build(&space, &d.del, &d.t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (random_degree(&space, &mut rng), random_degree(&space, &mut rng));
        let (f, g) = (random_form(&space, p, &mut rng), random_form(&space, q, &mut rng));
        let s = Rational::sign(parity_sign(p));
        for family in [&ops.d, &ops.bra, &ops.t] {
            for op in family.iter() {
                let lhs = op.apply(&space.cup(&f, &g));
                let rhs = sum(&space.cup(&op.apply(&f), &g), &space.cup(&f, &op.apply(&g)), &s);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    /// On a constant `a`, the level-`j` part of `D²` without the pure bracket
    /// terms is the bracket pairing of the twisting residual `R_j` with `a`:
    /// `(…)(a)(w) = (-1)^{|a||w|} R_j(w)(a)`.
    #[test]
    fn twisting_residual_pairs_with_constants(seed in any::<u64>(), which in 0usize..3) {
        let mut d = data(FIXTURES[which], 3);
        let ctx = d.ctx.clone();
        let alg = ctx.module().algebra().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let j = rng.gen_range(1..=2usize);
            let words = ctx.words_of_len(j);
            let w = words[rng.gen_range(0..words.len())];
            let space = derivation_space(&alg, ctx.word(w).degree - 1);
            if space.is_empty() {
                continue;
            }
            let delta = &space[rng.gen_range(0..space.len())].action;
            let c = Rational::from_int(rng.gen_range(1..=2));
            let new = match d.t.get(j, w) {
                Some(m) => m.add(&delta.scale(&c)).unwrap(),
                None => delta.scale(&c),
            };
            d.t.set(j, w, new);
        }
        let res = d.twisting_residual_maps();
        let space = Arc::new(FormSpace::new(ctx.clone()));
        let ops = AmbientOperators::build(&space, &d.del, &d.t);
        let one = Rational::one();
        for j in 1..ctx.max_len() {
            for a in 0..alg.dim() {
                let f = space.constant(&alg.basis_element(a));
                let mut lhs = sum(&ops.d[0].apply(&ops.t[j].apply(&f)), &ops.t[j].apply(&ops.d[0].apply(&f)), &one);
                for k in 1..j {
                    lhs = sum(&lhs, &ops.bra[k].apply(&ops.t[j - k].apply(&f)), &one);
                    lhs = sum(&lhs, &ops.t[k].apply(&ops.t[j - k].apply(&f)), &one);
                }
                for &w in ctx.words_of_len(j) {
                    let zero = LinearMap::zero(alg.basis().clone(), alg.basis().clone(), 0);
                    let r = res.get(&(j, w)).unwrap_or(&zero).column(a);
                    let s = Rational::sign(parity_sign(alg.degree(a) * ctx.word(w).degree));
                    let expected: Vec<Rational> = r.iter().map(|x| x * &s).collect();
                    prop_assert_eq!(space.value(&lhs, w), expected);
                }
            }
        }
    }
}
