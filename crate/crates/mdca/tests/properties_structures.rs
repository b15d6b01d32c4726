//! Invariants of Lie-Rinehart, sh Lie-Rinehart and quasi Lie-Rinehart data
//! and of their two verification routes.

mod common;

use std::sync::Arc;

use mdca::cdga::ground_field;
use mdca::cli_io::{catalog_instance, sh_data, Structure};
use mdca::graded_core::{parity_sign, GradedBasis, LinearMap, Rational, SVec};
use mdca::structures::{
    build_maurer_cartan, build_quasi_mc, check_lie_rinehart, check_sh_lie_rinehart, jacobi_defect_identity,
    quasi_literal_operators, quasi_to_sh, LieRinehartData, QuasiLieRinehartData,
};
use mdca::sym_coalgebra::{brackets_from_coderivation, ModuleSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Table = Vec<Vec<Vec<i64>>>;

/// Skew structure constants `[x_i, x_j] = Σ table[i][j][k] x_k` on rank 3.
fn skew_table() -> impl Strategy<Value = Table> {
    proptest::collection::vec(-1i64..=1, 9).prop_map(|c| {
        let mut t = vec![vec![vec![0; 3]; 3]; 3];
        for (n, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            for k in 0..3 {
                t[i][j][k] = c[3 * n + k];
                t[j][i][k] = -c[3 * n + k];
            }
        }
        t
    })
}

fn jacobi_holds(t: &Table) -> bool {
    let br = |u: &[i64], v: &[i64]| -> Vec<i64> {
        let mut out = vec![0; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[k] += u[i] * v[j] * t[i][j][k];
                }
            }
        }
        out
    };
    let e = |i: usize| -> Vec<i64> { (0..3).map(|k| i64::from(k == i)).collect() };
    (0..3).all(|i| {
        (0..3).all(|j| {
            (0..3).all(|k| {
                let a = br(&br(&e(i), &e(j)), &e(k));
                let b = br(&br(&e(j), &e(k)), &e(i));
                let c = br(&br(&e(k), &e(i)), &e(j));
                (0..3).all(|r| a[r] + b[r] + c[r] == 0)
            })
        })
    })
}

fn lie_algebra(t: &Table) -> LieRinehartData {
    let alg = Arc::new(ground_field());
    let ab = alg.basis().clone();
    let gens = Arc::new(GradedBasis::from_pairs([("x", 0), ("y", 0), ("z", 0)]).unwrap());
    let module = Arc::new(ModuleSpec::new(alg, gens, None).unwrap());
    let br: Vec<Vec<SVec>> = t
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (k, Rational::from_int(*c))).collect())
                .collect()
        })
        .collect();
    LieRinehartData::from_generators(module, &br, &vec![LinearMap::zero(ab.clone(), ab, 0); 3])
}

fn catalog_lr(name: &str) -> LieRinehartData {
    match catalog_instance(name).unwrap().unwrap().structure {
        Structure::LieRinehart(lr) => lr,
        _ => panic!("{name} is a Lie-Rinehart entry"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ungraded_pairs_reduce_to_the_jacobi_identity(t in skew_table()) {
        let lr = lie_algebra(&t);
        let ok = jacobi_holds(&t);
        prop_assert_eq!(check_lie_rinehart(&lr).is_empty(), ok);
        let rep = check_sh_lie_rinehart(&lr.to_sh(3).unwrap());
        let expected = if ok { None } else { Some(2) };
        prop_assert_eq!(rep.direct.first_failure(), expected);
        prop_assert_eq!(rep.maurer_cartan.first_failure(), expected);
    }

    #[test]
    fn routes_agree_under_single_entry_perturbations(seed in any::<u64>(), which in 0usize..4) {
        let name = ["heisenberg", "sl2", "exterior_pair", "quasi_sample"][which];
        let base = sh_data(&catalog_instance(name).unwrap().unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(data) = common::perturb(&base, &mut rng) {
            let rep = check_sh_lie_rinehart(&data);
            prop_assert!(rep.routes_agree(), "{:?} vs {:?}", rep.direct.issues, rep.maurer_cartan.issues);
            if rep.passes() {
                let m = build_maurer_cartan(&data).unwrap();
                prop_assert!(m.square_residuals().is_empty());
            }
        }
    }

    #[test]
    fn quasi_literal_operators_match_the_sh_route(
        m in proptest::collection::vec(-2i64..=2, 4),
        lambda in proptest::collection::vec(-2i64..=2, 2),
        b in proptest::collection::vec(-2i64..=2, 2),
        c in -2i64..=2,
    ) {
        let r = Rational::from_int;
        let q = QuasiLieRinehartData {
            names: vec!["xi".into(), "zeta".into()],
            m: vec![vec![r(m[0]), r(m[1])], vec![r(m[2]), r(m[3])]],
            lambda: lambda.iter().map(|x| r(*x)).collect(),
            bracket: vec![
                vec![vec![r(0), r(0)], vec![r(b[0]), r(b[1])]],
                vec![vec![r(-b[0]), r(-b[1])], vec![r(0), r(0)]],
            ],
            triple: vec![vec![r(0), r(c)], vec![r(-c), r(0)]],
        };
        let sh = quasi_to_sh(&q, 3).unwrap();
        let lit = build_quasi_mc(&q, 3).unwrap();
        let via_sh = build_maurer_cartan(&sh).unwrap();
        prop_assert!(lit == via_sh);
        for (j, op) in quasi_literal_operators(&q, 3).unwrap().iter().enumerate() {
            prop_assert_eq!(op, lit.op(j));
        }
        let rep = check_sh_lie_rinehart(&sh);
        prop_assert!(rep.routes_agree());
        prop_assert_eq!(rep.passes(), lit.square_residuals().is_empty());
        if rep.passes() {
            prop_assert!(jacobi_defect_identity(&q).holds());
        }
    }
}

#[test]
fn brackets_are_graded_skew_and_survive_the_coalgebra() {
    for name in ["abelian", "heisenberg", "sl2", "jacobi_violator", "exterior_pair"] {
        let lr = catalog_lr(name);
        let n = lr.module.dim();
        for p in 0..n {
            for q in 0..n {
                let s = Rational::sign(-parity_sign(lr.degree(p) * lr.degree(q)));
                let flipped: SVec = lr.bracket[q][p].iter().map(|(k, c)| (*k, c * &s)).collect();
                assert_eq!(lr.bracket[p][q], flipped, "{name}: [{p}, {q}]");
            }
        }
        let sh = lr.to_sh(3).unwrap();
        let b = brackets_from_coderivation(&sh.ctx, &sh.del, 2).unwrap();
        for (xs, v) in &b.values {
            assert_eq!(&lr.bracket[xs[0]][xs[1]], v, "{name}");
        }
    }
}
