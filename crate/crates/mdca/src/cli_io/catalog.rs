//! Built-in example instances.

use std::sync::Arc;

use serde_json::json;

use super::format::{emit_instance, emit_value, instance_json, parse_instance, InputError, Instance, Policy, Structure};
use crate::cdga::{exterior, ground_field, monomial_algebra, AlgebraSpec};
use crate::graded_core::{GradedBasis, LinearMap, Rational, SVec};
use crate::structures::{solve_quasi_constraints, LieRinehartData};
use crate::sym_coalgebra::ModuleSpec;

pub const NAMES: [&str; 7] =
    ["abelian", "heisenberg", "sl2", "jacobi_violator", "exterior_pair", "truncated_poly", "quasi_sample"];

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

fn instance(name: &str, structure: Structure, module: Arc<ModuleSpec>) -> Instance {
    Instance { name: Some(name.into()), module, structure, policy: Policy { w: Some(super::DEFAULT_W), degree_window: None } }
}

fn free_module(alg: Arc<AlgebraSpec>, gens: &[(&str, i64)]) -> Arc<ModuleSpec> {
    let gens = Arc::new(GradedBasis::from_pairs(gens.iter().copied()).expect("distinct labels"));
    Arc::new(ModuleSpec::new(alg, gens, None).expect("zero differential"))
}

/// A Lie algebra over ℚ in degree 0 from `[x_i, x_j] = Σ c x_k`, `i < j`.
fn lie(name: &str, names: &[&str], table: &[(usize, usize, &[(usize, i64)])]) -> Instance {
    let alg = Arc::new(ground_field());
    let ab = alg.basis().clone();
    let gens: Vec<(&str, i64)> = names.iter().map(|n| (*n, 0)).collect();
    let module = free_module(alg, &gens);
    let n = names.len();
    let mut br = vec![vec![SVec::new(); n]; n];
    for (i, j, v) in table {
        br[*i][*j] = v.iter().map(|(k, c)| (*k, r(*c))).collect();
        br[*j][*i] = v.iter().map(|(k, c)| (*k, r(-c))).collect();
    }
    let anchors = vec![LinearMap::zero(ab.clone(), ab, 0); n];
    let lr = LieRinehartData::from_generators(module.clone(), &br, &anchors);
    instance(name, Structure::LieRinehart(lr), module)
}

/// The abelian Lie algebra on `x1..xn`.
pub fn abelian(n: usize) -> Instance {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    lie(&format!("abelian{n}"), &refs, &[])
}

fn heisenberg() -> Instance {
    lie("heisenberg", &["x", "y", "z"], &[(0, 1, &[(2, 1)])])
}

fn sl2() -> Instance {
    lie("sl2", &["e", "f", "h"], &[(0, 1, &[(2, 1)]), (0, 2, &[(0, -2)]), (1, 2, &[(1, 2)])])
}

/// `[x,y] = x`, `[y,z] = y`, `[z,x] = z`: skew but not Jacobi.
fn jacobi_violator() -> Instance {
    lie("jacobi_violator", &["x", "y", "z"], &[(0, 1, &[(0, 1)]), (1, 2, &[(1, 1)]), (0, 2, &[(2, -1)])])
}

/// Λ[t1, t2] with its derivations, free on `∂/∂t1`, `∂/∂t2`.
fn exterior_pair() -> Instance {
    let alg = Arc::new(exterior(&["t1", "t2"], -1));
    let ab = alg.basis().clone();
    let module = free_module(alg, &[("d1", 1), ("d2", 1)]);
    let p = |l: &str| ab.position(l).expect("exterior basis");
    let d1 = LinearMap::from_entries(ab.clone(), ab.clone(), 1, [(p("1"), p("t1"), r(1)), (p("t2"), p("t1t2"), r(1))])
        .expect("degree 1");
    let d2 = LinearMap::from_entries(ab.clone(), ab.clone(), 1, [(p("1"), p("t2"), r(1)), (p("t1"), p("t1t2"), r(-1))])
        .expect("degree 1");
    let lr = LieRinehartData::from_generators(module.clone(), &vec![vec![SVec::new(); 2]; 2], &[d1, d2]);
    instance("exterior_pair", Structure::LieRinehart(lr), module)
}

/// ℚ[x]/(x³) with the Euler derivation `E`; `Der` is generated by `E` subject
/// to `x²·E = 0`, so it is not free and the file is rejected on input.
fn truncated_poly_text() -> String {
    let alg = Arc::new(monomial_algebra(&[("x", -2)], 2));
    let ab = alg.basis().clone();
    let module = free_module(alg, &[("E", 0)]);
    let p = |l: &str| ab.position(l).expect("monomial basis");
    let euler = LinearMap::from_entries(ab.clone(), ab.clone(), 0, [(p("x"), p("x"), r(1)), (p("x^2"), p("x^2"), r(2))])
        .expect("degree 0");
    let lr = LieRinehartData::from_generators(module.clone(), &[vec![SVec::new()]], &[euler]);
    let mut v = instance_json(&instance("truncated_poly", Structure::LieRinehart(lr), module));
    v["module"]["relations"] = json!([[[p("x^2"), 0, "1"]]]);
    emit_value(&v)
}

fn quasi_sample() -> Instance {
    let q = solve_quasi_constraints(["xi", "zeta"], 3).expect("the search space contains a certified pair");
    let module = q.module();
    instance("quasi_sample", Structure::Quasi(q), module)
}

/// The instance file for a catalog name.
pub fn catalog_text(name: &str) -> Option<String> {
    let inst = match name {
        "abelian" => {
            let mut i = abelian(2);
            i.name = Some("abelian".into());
            i
        }
        "heisenberg" => heisenberg(),
        "sl2" => sl2(),
        "jacobi_violator" => jacobi_violator(),
        "exterior_pair" => exterior_pair(),
        "truncated_poly" => return Some(truncated_poly_text()),
        "quasi_sample" => quasi_sample(),
        _ => return None,
    };
    Some(emit_instance(&inst))
}

/// Parses a catalog entry; `None` for unknown names.
pub fn catalog_instance(name: &str) -> Option<Result<Instance, InputError>> {
    catalog_text(name).map(|t| parse_instance(&t))
}
