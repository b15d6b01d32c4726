use std::sync::Arc;

use super::*;
use crate::cdga::{exterior, ground_field};
use crate::graded_core::{GradedBasis, LinearMap, Rational, SVec};
use crate::sym_coalgebra::ModuleSpec;

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Λ[θ1, θ2] with L free on the odd derivations `∂1`, `∂2`.
fn exterior_pair() -> LieRinehartData {
    let alg = Arc::new(exterior(&["t1", "t2"], -1));
    let ab = alg.basis().clone();
    let gens = Arc::new(GradedBasis::from_pairs([("d1", 1), ("d2", 1)]).unwrap());
    let module = Arc::new(ModuleSpec::new(alg.clone(), gens, None).unwrap());
    let p = |l: &str| ab.position(l).unwrap();
    let d1 = LinearMap::from_entries(
        ab.clone(),
        ab.clone(),
        1,
        [(p("1"), p("t1"), r(1)), (p("t2"), p("t1t2"), r(1))],
    )
    .unwrap();
    let d2 = LinearMap::from_entries(
        ab.clone(),
        ab.clone(),
        1,
        [(p("1"), p("t2"), r(1)), (p("t1"), p("t1t2"), r(-1))],
    )
    .unwrap();
    LieRinehartData::from_generators(module, &vec![vec![SVec::new(); 2]; 2], &[d1, d2])
}

fn lie(names: &[&str], table: &[(usize, usize, Vec<(usize, i64)>)]) -> LieRinehartData {
    let alg = Arc::new(ground_field());
    let ab = alg.basis().clone();
    let gens = Arc::new(GradedBasis::from_pairs(names.iter().map(|n| (*n, 0))).unwrap());
    let module = Arc::new(ModuleSpec::new(alg, gens, None).unwrap());
    let n = names.len();
    let mut br = vec![vec![SVec::new(); n]; n];
    for (i, j, v) in table {
        br[*i][*j] = v.iter().map(|(k, c)| (*k, r(*c))).collect();
        br[*j][*i] = v.iter().map(|(k, c)| (*k, r(-c))).collect();
    }
    let anchors = vec![LinearMap::zero(ab.clone(), ab, 0); n];
    LieRinehartData::from_generators(module, &br, &anchors)
}

fn sl2() -> LieRinehartData {
    // e, f, h with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    lie(&["e", "f", "h"], &[(2, 0, vec![(0, 2)]), (2, 1, vec![(1, -2)]), (0, 1, vec![(2, 1)])])
}

fn violator() -> LieRinehartData {
    lie(&["x", "y", "z"], &[(0, 1, vec![(0, 1)]), (1, 2, vec![(1, 1)]), (2, 0, vec![(2, 1)])])
}

#[test]
fn exterior_pair_is_lie_rinehart() {
    let lr = exterior_pair();
    assert_eq!(check_lie_rinehart(&lr), vec![]);
    // [θ1 ∂1, ∂2] = -(-1)^{0·1} ∂2(θ1) ∂1 = 0 and [∂1, θ1 ∂2] = ∂1(θ1) ∂2 = ∂2
    let q = lr.module.qbasis();
    let i = |l: &str| q.position(l).unwrap();
    assert_eq!(lr.bracket[i("d1")][i("t1*d2")], [(i("d2"), r(1))].into_iter().collect());
    assert!(lr.bracket[i("t1*d1")][i("d2")].is_empty());
}

#[test]
fn generator_extension_matches_lie_rinehart_tables() {
    let lr = exterior_pair();
    let sh = lr.to_sh(3).unwrap();
    let (del, t) = sh.generator_data();
    let rebuilt = ShLieRinehartData::from_generators(sh.ctx.clone(), &del, &t).unwrap();
    assert_eq!(rebuilt.t, sh.t);
    assert_eq!(rebuilt.del, sh.del);
}

#[test]
fn exterior_pair_routes_pass() {
    let sh = exterior_pair().to_sh(3).unwrap();
    let rep = check_sh_lie_rinehart(&sh);
    assert_eq!(rep.direct.issues, vec![]);
    assert_eq!(rep.maurer_cartan.issues, vec![]);
}

#[test]
fn exterior_pair_descent_needs_both_summands() {
    use crate::convolution::{descent_check, AmbientOperators, DescendedSpace, FormSpace};
    let sh = exterior_pair().to_sh(3).unwrap();
    let space = FormSpace::new(sh.ctx.clone());
    let desc = DescendedSpace::new(&space);
    let ops = AmbientOperators::build(&space, &sh.del, &sh.t);
    let rep = &descent_check(&space, &desc, &ops)[1];
    assert!(rep.passes());
    assert!(rep.bracket_summand.is_some());
    assert!(rep.twisting_summand.is_some());
}

#[test]
fn exterior_pair_round_trip() {
    let sh = exterior_pair().to_sh(3).unwrap();
    let m = build_maurer_cartan(&sh).unwrap();
    assert!(m.square_residuals().is_empty());
    assert!(m.derivation_failures().is_empty());
    let ex = extract_structure(&m);
    assert!(ex.consistent);
    assert_eq!(ex.data.t, sh.t);
    assert_eq!(ex.data.del, sh.del);
}

#[test]
fn sl2_passes_and_violator_fails_at_level_two() {
    let ok = check_sh_lie_rinehart(&sl2().to_sh(3).unwrap());
    assert!(ok.passes());
    let lr = violator();
    let jac: Vec<_> = check_lie_rinehart(&lr).into_iter().map(|i| i.check).collect();
    assert!(jac.iter().all(|c| c == "Jacobi identity"), "{jac:?}");
    assert!(!jac.is_empty());
    let rep = check_sh_lie_rinehart(&lr.to_sh(3).unwrap());
    assert_eq!(rep.direct.first_failure(), Some(2));
    assert_eq!(rep.maurer_cartan.first_failure(), Some(2));
}

#[test]
fn broken_anchor_fails_at_level_one_in_both_routes() {
    let mut sh = exterior_pair().to_sh(3).unwrap();
    let ab = sh.module().algebra().basis().clone();
    let w = sh.ctx.gen_word(sh.ctx.pure_gen(0));
    let mut m = sh.t.get(1, w).unwrap().clone();
    m.add_to(ab.position("t2").unwrap(), ab.position("t1t2").unwrap(), &r(1)).unwrap();
    sh.t.set(1, w, m);
    let rep = check_sh_lie_rinehart(&sh);
    assert_eq!(rep.direct.first_failure(), Some(1));
    assert!(rep.routes_agree());
    assert!(build_maurer_cartan(&sh).is_err());
}

#[test]
fn generator_data_are_validated() {
    let sh = exterior_pair().to_sh(3).unwrap();
    let ctx = sh.ctx.clone();
    let mut del = crate::sym_coalgebra::Coderivation::new();
    let w = ctx.normalize(&[ctx.gen_of(1, 0) as u32, ctx.pure_gen(1) as u32]).unwrap().1;
    del.set(1, w, [(ctx.pure_gen(0), r(1))].into_iter().collect());
    let err = ShLieRinehartData::from_generators(ctx, &del, &crate::convolution::TwistingCochain::new());
    assert!(matches!(err, Err(DataError::NotGenerator { level: 1, .. })));
}

fn quasi() -> QuasiLieRinehartData {
    solve_quasi_constraints(["xi", "zeta"], 3).expect("solver finds a certified pair")
}

#[test]
fn quasi_literal_structure_matches_sh_route() {
    let q = quasi();
    assert!(!q.triple[0][1].is_zero());
    let lit = build_quasi_mc(&q, 3).unwrap();
    assert!(lit.square_residuals().is_empty());
    let via_sh = build_maurer_cartan(&quasi_to_sh(&q, 3).unwrap()).unwrap();
    assert_eq!(lit.on_algebra, via_sh.on_algebra);
    assert_eq!(lit.on_duals, via_sh.on_duals);
    let ops = quasi_literal_operators(&q, 3).unwrap();
    for (j, op) in ops.iter().enumerate() {
        assert_eq!(op, lit.op(j), "level {j}");
    }
}

#[test]
fn quasi_sh_pair_passes_both_routes() {
    let rep = check_sh_lie_rinehart(&quasi_to_sh(&quasi(), 3).unwrap());
    assert_eq!(rep.direct.issues, vec![]);
    assert_eq!(rep.maurer_cartan.issues, vec![]);
}

#[test]
fn quasi_jacobi_defect_holds() {
    assert!(jacobi_defect_identity(&quasi()).holds());
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Rank 3 over the Jacobi-violating bracket `[x,y] = x, [y,z] = y, [z,x] = z`,
/// with `M` and `c` solved from the square-zero equations.
fn quasi_rank3() -> QuasiLieRinehartData {
    let mut bracket = vec![vec![vec![r(0); 3]; 3]; 3];
    for (i, j, k) in [(0, 1, 0), (1, 2, 1), (2, 0, 2)] {
        bracket[i][j][k] = r(1);
        bracket[j][i][k] = r(-1);
    }
    QuasiLieRinehartData {
        names: vec!["x".into(), "y".into(), "z".into()],
        m: vec![vec![r(1), r(0), q(1, 2)], vec![q(1, 2), r(1), r(0)], vec![r(0), q(1, 2), r(1)]],
        lambda: vec![r(1), r(1), r(1)],
        bracket,
        triple: vec![
            vec![r(0), q(2, 3), q(-2, 3)],
            vec![q(-2, 3), r(0), q(2, 3)],
            vec![q(2, 3), q(-2, 3), r(0)],
        ],
    }
}

#[test]
fn rank3_literal_operators_match_sh_route() {
    let q3 = quasi_rank3();
    let lit = build_quasi_mc(&q3, 3).unwrap();
    assert!(lit.square_residuals().is_empty());
    let via_sh = build_maurer_cartan(&quasi_to_sh(&q3, 3).unwrap()).unwrap();
    assert!(lit == via_sh);
    let ops = quasi_literal_operators(&q3, 3).unwrap();
    for (j, op) in ops.iter().enumerate() {
        assert_eq!(op, lit.op(j), "level {j}");
    }
    assert!(check_sh_lie_rinehart(&quasi_to_sh(&q3, 3).unwrap()).passes());
}

#[test]
fn rank3_jacobi_defect_has_a_global_sign() {
    let q3 = quasi_rank3();
    let rep = jacobi_defect_identity(&q3);
    assert!(rep.holds());
    assert_eq!(rep.sign, Some(-1));
    let mut broken = q3.clone();
    broken.triple[0][1] = r(1);
    broken.triple[1][0] = r(-1);
    assert!(!jacobi_defect_identity(&broken).holds());
    let rep = check_sh_lie_rinehart(&quasi_to_sh(&broken, 3).unwrap());
    assert_eq!(rep.direct.first_failure(), Some(2));
    assert!(rep.routes_agree());
}
