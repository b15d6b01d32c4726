use std::collections::HashMap;

use super::{AlgebraSpec, Element};
use crate::graded_core::{compose, parity_sign, LinearMap, Matrix, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("derivations act on different algebras")]
    AlgebraMismatch,
    #[error("Leibniz rule fails on ({0}, {1})")]
    Leibniz(String, String),
    #[error("map has degree {got}, expected {expected}")]
    Degree { got: i64, expected: i64 },
}

/// A homogeneous derivation, stored as its matrix on the algebra basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i64,
    pub action: LinearMap,
}

impl Derivation {
    /// Wraps `action`, rejecting it unless the Leibniz rule holds on all
    /// basis pairs.
    pub fn new(a: &AlgebraSpec, action: LinearMap) -> Result<Self, DerivationError> {
        let d = Derivation { degree: action.degree(), action };
        if let Some((i, j)) = d.leibniz_witness(a) {
            return Err(DerivationError::Leibniz(
                a.basis().label(i).to_string(),
                a.basis().label(j).to_string(),
            ));
        }
        Ok(d)
    }

    pub fn zero(a: &AlgebraSpec, degree: i64) -> Self {
        Derivation {
            degree,
            action: LinearMap::zero(a.basis().clone(), a.basis().clone(), degree),
        }
    }

    pub fn apply(&self, x: &[Rational]) -> Element {
        self.action.apply(x)
    }

    /// First basis pair `(i, j)` on which `δ(a_i a_j) = δ(a_i) a_j + ± a_i δ(a_j)` fails.
    pub fn leibniz_witness(&self, a: &AlgebraSpec) -> Option<(usize, usize)> {
        let n = a.dim();
        let img: Vec<Element> = (0..n).map(|i| self.action.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply(a.mul_basis(i, j));
                let mut rhs = a.mul(&img[i], &a.basis_element(j));
                let s = Rational::sign(parity_sign(self.degree * a.degree(i)));
                let t = a.mul_left_basis(i, &img[j]);
                for (r, x) in rhs.iter_mut().zip(t) {
                    *r += &s * &x;
                }
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// `[δ1, δ2] = δ1 δ2 - (-1)^{|δ1||δ2|} δ2 δ1`.
pub fn graded_commutator(d1: &Derivation, d2: &Derivation) -> Result<Derivation, DerivationError> {
    if d1.action.source() != d2.action.source() {
        return Err(DerivationError::AlgebraMismatch);
    }
    let ab = compose(&d1.action, &d2.action).map_err(|_| DerivationError::AlgebraMismatch)?;
    let ba = compose(&d2.action, &d1.action).map_err(|_| DerivationError::AlgebraMismatch)?;
    let s = Rational::sign(-parity_sign(d1.degree * d2.degree));
    let action = ab.add(&ba.scale(&s)).map_err(|_| DerivationError::AlgebraMismatch)?;
    let degree = d1.degree + d2.degree;
    let action = if action.is_zero() {
        LinearMap::zero(action.source().clone(), action.target().clone(), degree)
    } else {
        action
    };
    Ok(Derivation { degree, action })
}

/// A rational basis of the derivations of degree `deg`, found by solving the
/// Leibniz system on all basis pairs.
pub fn derivation_space(a: &AlgebraSpec, deg: i64) -> Vec<Derivation> {
    let n = a.dim();
    let mut unknowns = Vec::new();
    let mut idx = HashMap::new();
    for j in 0..n {
        for i in 0..n {
            if a.degree(i) == a.degree(j) + deg {
                idx.insert((i, j), unknowns.len());
                unknowns.push((i, j));
            }
        }
    }
    if unknowns.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let sign = Rational::sign(parity_sign(deg * a.degree(p)));
            for k in 0..n {
                let mut row = vec![Rational::zero(); unknowns.len()];
                for (m, c) in a.mul_basis(p, q).iter().enumerate() {
                    if let Some(&u) = idx.get(&(k, m)) {
                        row[u] += c;
                    }
                }
                for i in 0..n {
                    if let Some(&u) = idx.get(&(i, p)) {
                        row[u] -= &a.mul_basis(i, q)[k];
                    }
                    if let Some(&u) = idx.get(&(i, q)) {
                        row[u] -= &sign * &a.mul_basis(p, i)[k];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(unknowns.len()).data.chunks(unknowns.len()).map(|c| c.to_vec()).collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let entries = unknowns.iter().zip(v).map(|(&(i, j), x)| (i, j, x));
            let action = LinearMap::from_entries(a.basis().clone(), a.basis().clone(), deg, entries)
                .expect("unknowns respect degrees");
            Derivation { degree: deg, action }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{exterior, ground_field, monomial_algebra};

    fn map(a: &AlgebraSpec, deg: i64, e: &[(&str, &str, i64)]) -> LinearMap {
        let b = a.basis();
        LinearMap::from_entries(
            b.clone(),
            b.clone(),
            deg,
            e.iter().map(|(t, s, v)| {
                (b.position(t).unwrap(), b.position(s).unwrap(), Rational::from_int(*v))
            }),
        )
        .unwrap()
    }

    #[test]
    fn ground_field_has_no_derivations() {
        let q = ground_field();
        for d in -2..=2 {
            assert!(derivation_space(&q, d).is_empty());
        }
    }

    #[test]
    fn truncated_polynomial_degree_zero() {
        let a = monomial_algebra(&[("x", 0)], 2);
        let ders = derivation_space(&a, 0);
        assert_eq!(ders.len(), 2);
        let x = a.basis().position("x").unwrap();
        let one = a.basis().position("1").unwrap();
        for d in &ders {
            assert!(d.leibniz_witness(&a).is_none());
            assert!(d.action.get(one, x).is_zero());
        }
    }

    #[test]
    fn truncated_polynomial_commutator() {
        let a = monomial_algebra(&[("x", 0)], 2);
        let xd = Derivation::new(&a, map(&a, 0, &[("x", "x", 1), ("x^2", "x^2", 2)])).unwrap();
        let x2d = Derivation::new(&a, map(&a, 0, &[("x^2", "x", 1)])).unwrap();
        let c = graded_commutator(&xd, &x2d).unwrap();
        assert_eq!(c.action, x2d.action);
    }

    #[test]
    fn exterior_one_generator() {
        let a = exterior(&["t"], -1);
        let dt = Derivation::new(&a, map(&a, 1, &[("1", "t", 1)])).unwrap();
        let tdt = Derivation::new(&a, map(&a, 0, &[("t", "t", 1)])).unwrap();
        let c = graded_commutator(&dt, &tdt).unwrap();
        assert_eq!(c.action, dt.action);
        assert_eq!(derivation_space(&a, 1).len(), 1);
        assert_eq!(derivation_space(&a, 0).len(), 1);
        let dd = graded_commutator(&tdt, &tdt).unwrap();
        assert!(dd.action.is_zero());
    }

    #[test]
    fn non_derivation_rejected() {
        let a = exterior(&["t"], -1);
        let bad = map(&a, 0, &[("1", "1", 1)]);
        assert!(matches!(Derivation::new(&a, bad), Err(DerivationError::Leibniz(..))));
    }
}
