use std::collections::HashMap;
use std::sync::Arc;

use super::AlgebraSpec;
use crate::graded_core::{sort_sign, GradedBasis, LinearMap, Rational};

fn label(names: &[&str], exps: &[usize]) -> String {
    let mut s = String::new();
    for (n, &e) in names.iter().zip(exps) {
        match e {
            0 => {}
            1 => s.push_str(n),
            _ => s.push_str(&format!("{n}^{e}")),
        }
    }
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

fn exponent_vectors(n: usize, total: usize, odd: &[bool]) -> Vec<Vec<usize>> {
    fn rec(i: usize, left: usize, odd: &[bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = if odd[i] { left.min(1) } else { left };
        for e in (0..=cap).rev() {
            cur[i] = e;
            rec(i + 1, left - e, odd, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, total, odd, &mut vec![0; n], &mut out);
    out
}

/// Free graded commutative algebra on `gens` modulo all monomials of
/// polynomial length greater than `max_len`. Odd generators square to zero.
pub fn monomial_algebra(gens: &[(&str, i64)], max_len: usize) -> AlgebraSpec {
    let names: Vec<&str> = gens.iter().map(|g| g.0).collect();
    let degs: Vec<i64> = gens.iter().map(|g| g.1).collect();
    let odd: Vec<bool> = degs.iter().map(|d| d % 2 != 0).collect();
    let mut monos = Vec::new();
    for t in 0..=max_len {
        monos.extend(exponent_vectors(gens.len(), t, &odd));
    }
    let index: HashMap<Vec<usize>, usize> =
        monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let basis = Arc::new(
        GradedBasis::from_pairs(monos.iter().map(|m| {
            let d: i64 = m.iter().zip(&degs).map(|(&e, &d)| e as i64 * d).sum();
            (label(&names, m), d)
        }))
        .expect("monomial labels are distinct"),
    );
    let mut mult = Vec::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let Some(&k) = index.get(&c) else { continue };
            let mut seq = Vec::new();
            for m in [a, b] {
                for (g, &e) in m.iter().enumerate() {
                    if odd[g] && e == 1 {
                        seq.push((g, 1));
                    }
                }
            }
            let (s, _) = sort_sign(&seq);
            mult.push((i, j, k, Rational::sign(s)));
        }
    }
    let unit = index[&vec![0; gens.len()]];
    let diff = LinearMap::zero(basis.clone(), basis.clone(), -1);
    AlgebraSpec::new(basis, unit, mult, diff).expect("monomial algebra is well formed")
}

/// Exterior algebra on generators all of the given (odd) degree.
pub fn exterior(names: &[&str], degree: i64) -> AlgebraSpec {
    let gens: Vec<(&str, i64)> = names.iter().map(|n| (*n, degree)).collect();
    monomial_algebra(&gens, names.len())
}

/// The ground field as a one-dimensional algebra.
pub fn ground_field() -> AlgebraSpec {
    monomial_algebra(&[], 0)
}
