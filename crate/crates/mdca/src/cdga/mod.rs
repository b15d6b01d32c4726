//! Finite-dimensional differential graded commutative algebras given by
//! structure constants, their derivations and the commutator bracket.

mod builders;
mod derivation;

use std::sync::Arc;

use crate::graded_core::{parity_sign, GradedBasis, LinearMap, Rational};

pub use builders::{exterior, ground_field, monomial_algebra};
pub use derivation::{derivation_space, graded_commutator, Derivation, DerivationError};

/// Dense coordinates over an algebra basis.
pub type Element = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    basis: Arc<GradedBasis>,
    unit: usize,
    /// `mult[i][j]` is the product of basis elements `i` and `j`.
    mult: Vec<Vec<Element>>,
    diff: LinearMap,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unit required: the algebra has no basis elements")]
    Empty,
    #[error("unit index {0} out of range")]
    UnitOutOfRange(usize),
    #[error("structure constant index out of range: ({0}, {1}, {2})")]
    IndexOutOfRange(usize, usize, usize),
    #[error("differential must have degree -1, got {0}")]
    DiffDegree(i64),
    #[error("differential is defined on a different basis")]
    DiffBasis,
    #[error("element has {got} coordinates, algebra has dimension {dim}")]
    Mismatch { got: usize, dim: usize },
}

/// One violated algebra axiom with the basis tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub witness: Vec<String>,
}

impl AlgebraSpec {
    pub fn new(
        basis: Arc<GradedBasis>,
        unit: usize,
        mult: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        diff: LinearMap,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        if unit >= n {
            return Err(AlgebraError::UnitOutOfRange(unit));
        }
        if diff.degree() != -1 && !diff.is_zero() {
            return Err(AlgebraError::DiffDegree(diff.degree()));
        }
        if **diff.source() != *basis || **diff.target() != *basis {
            return Err(AlgebraError::DiffBasis);
        }
        let mut table = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, k, c) in mult {
            if i >= n || j >= n || k >= n {
                return Err(AlgebraError::IndexOutOfRange(i, j, k));
            }
            table[i][j][k] += c;
        }
        Ok(AlgebraSpec { basis, unit, mult: table, diff })
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis.degree(i)
    }

    pub fn diff(&self) -> &LinearMap {
        &self.diff
    }

    pub fn has_zero_diff(&self) -> bool {
        self.diff.is_zero()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Element {
        &self.mult[i][j]
    }

    /// Nonzero structure constants `(i, j, k, c)` with `a_i a_j = ... + c a_k`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn zero(&self) -> Element {
        vec![Rational::zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = Rational::one();
        e
    }

    pub fn one(&self) -> Element {
        self.basis_element(self.unit)
    }

    pub fn multiply(&self, a: &[Rational], b: &[Rational]) -> Result<Element, AlgebraError> {
        for v in [a, b] {
            if v.len() != self.dim() {
                return Err(AlgebraError::Mismatch { got: v.len(), dim: self.dim() });
            }
        }
        Ok(self.mul(a, b))
    }

    /// Unchecked bilinear product.
    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Element {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// `a_i * b` for a basis element `a_i`.
    pub fn mul_left_basis(&self, i: usize, b: &[Rational]) -> Element {
        let mut out = self.zero();
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for (k, c) in self.mult[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += y * c;
                }
            }
        }
        out
    }

    pub fn d(&self, a: &[Rational]) -> Element {
        self.diff.apply(a)
    }

    /// The degree of a nonzero homogeneous element, `None` for zero or mixed.
    pub fn element_degree(&self, a: &[Rational]) -> Option<i64> {
        let mut deg = None;
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degree(i)),
                Some(d) if d != self.degree(i) => return None,
                _ => {}
            }
        }
        deg
    }

    /// Every violated axiom with a witnessing basis tuple; empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.dim();
        let lab = |i: usize| self.basis.label(i).to_string();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = &self.mult[i][j];
                let dij = self.degree(i) + self.degree(j);
                if p.iter().enumerate().any(|(k, c)| !c.is_zero() && self.degree(k) != dij) {
                    out.push(Violation { invariant: "degree additivity", witness: vec![lab(i), lab(j)] });
                }
                let s = Rational::sign(parity_sign(self.degree(i) * self.degree(j)));
                let q: Element = self.mult[j][i].iter().map(|c| c * &s).collect();
                if *p != q {
                    out.push(Violation { invariant: "graded commutativity", witness: vec![lab(i), lab(j)] });
                }
            }
        }
        let u = self.unit;
        for i in 0..n {
            let e = self.basis_element(i);
            if self.mult[u][i] != e || self.mult[i][u] != e {
                out.push(Violation { invariant: "unit", witness: vec![lab(i)] });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ab = &self.mult[i][j];
                for k in 0..n {
                    let left = self.mul(ab, &self.basis_element(k));
                    let right = self.mul_left_basis(i, &self.mult[j][k]);
                    if left != right {
                        out.push(Violation {
                            invariant: "associativity",
                            witness: vec![lab(i), lab(j), lab(k)],
                        });
                    }
                }
            }
        }
        for i in 0..n {
            let dd = self.d(&self.d(&self.basis_element(i)));
            if dd.iter().any(|c| !c.is_zero()) {
                out.push(Violation { invariant: "d0 squares to zero", witness: vec![lab(i)] });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d(&self.mult[i][j]);
                let mut rhs = self.mul(&self.d(&self.basis_element(i)), &self.basis_element(j));
                let s = Rational::sign(parity_sign(self.degree(i)));
                let t = self.mul_left_basis(i, &self.d(&self.basis_element(j)));
                for (r, x) in rhs.iter_mut().zip(t) {
                    *r += &s * &x;
                }
                if lhs != rhs {
                    out.push(Violation { invariant: "d0 Leibniz rule", witness: vec![lab(i), lab(j)] });
                }
            }
        }
        out
    }

    /// Rebuilds the algebra with one structure constant replaced; used to
    /// produce deliberately broken tables.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: Rational) -> Self {
        let mut a = self.clone();
        a.mult[i][j][k] = c;
        a
    }

    pub fn with_diff(&self, diff: LinearMap) -> Result<Self, AlgebraError> {
        AlgebraSpec::new(self.basis.clone(), self.unit, self.structure_constants(), diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn ground_and_exterior_are_valid() {
        assert!(ground_field().validate().is_empty());
        let e = exterior(&["t"], -1);
        assert!(e.validate().is_empty());
        let t = e.basis().position("t").unwrap();
        assert!(e.mul_basis(t, t).iter().all(Rational::is_zero));
    }

    #[test]
    fn tampered_commutativity_is_reported() {
        let a = exterior(&["t1", "t2"], -1);
        let (t1, t2, t12) = (
            a.basis().position("t1").unwrap(),
            a.basis().position("t2").unwrap(),
            a.basis().position("t1t2").unwrap(),
        );
        let bad = a.with_constant(t1, t2, t12, r(5));
        let v = bad.validate();
        assert!(v.iter().any(|x| x.invariant == "graded commutativity"
            && x.witness == vec!["t1".to_string(), "t2".to_string()]));
    }

    #[test]
    fn product_of_unipotents() {
        let a = exterior(&["t1", "t2"], -1);
        let b = a.basis();
        let mut x = a.one();
        x[b.position("t1").unwrap()] = r(1);
        let mut y = a.one();
        y[b.position("t2").unwrap()] = r(1);
        let p = a.multiply(&x, &y).unwrap();
        for l in ["1", "t1", "t2", "t1t2"] {
            assert_eq!(p[b.position(l).unwrap()], r(1), "{l}");
        }
    }

    #[test]
    fn empty_algebra_rejected() {
        let b = Arc::new(GradedBasis::new(vec![]).unwrap());
        let d = LinearMap::zero(b.clone(), b.clone(), -1);
        assert_eq!(AlgebraSpec::new(b, 0, vec![], d), Err(AlgebraError::Empty));
    }
}
