use std::sync::Arc;

use crate::cdga::{AlgebraSpec, Element};
use crate::graded_core::{parity_sign, GradedBasis, LinearMap, Rational, SVec};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module differential must have degree -1, got {0}")]
    DiffDegree(i64),
    #[error("module differential is defined on a different basis")]
    DiffBasis,
    #[error("generator value has wrong degree for {0:?}")]
    ValueDegree(String),
}

/// A free graded A-module of finite rank, with a differential on its induced
/// rational basis `{a_i x_k}`.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    algebra: Arc<AlgebraSpec>,
    gens: Arc<GradedBasis>,
    qbasis: Arc<GradedBasis>,
    diff: LinearMap,
}

fn pair_label(a: &str, x: &str) -> String {
    if a == "1" {
        x.to_string()
    } else {
        format!("{a}*{x}")
    }
}

impl ModuleSpec {
    /// `diff` is on the rational basis returned by [`ModuleSpec::qbasis_for`].
    pub fn new(algebra: Arc<AlgebraSpec>, gens: Arc<GradedBasis>, diff: Option<LinearMap>) -> Result<Self, ModuleError> {
        let qbasis = Self::qbasis_for(&algebra, &gens);
        let diff = match diff {
            Some(d) => {
                if **d.source() != *qbasis || **d.target() != *qbasis {
                    return Err(ModuleError::DiffBasis);
                }
                if d.degree() != -1 && !d.is_zero() {
                    return Err(ModuleError::DiffDegree(d.degree()));
                }
                d
            }
            None => LinearMap::zero(qbasis.clone(), qbasis.clone(), -1),
        };
        Ok(ModuleSpec { algebra, gens, qbasis, diff })
    }

    /// The rational basis of `A ⊗ span(gens)`; index `k * dim A + i` is `a_i x_k`.
    pub fn qbasis_for(algebra: &AlgebraSpec, gens: &GradedBasis) -> Arc<GradedBasis> {
        let ab = algebra.basis();
        let mut pairs = Vec::with_capacity(ab.len() * gens.len());
        for k in 0..gens.len() {
            for i in 0..ab.len() {
                pairs.push((pair_label(ab.label(i), gens.label(k)), ab.degree(i) + gens.degree(k)));
            }
        }
        Arc::new(GradedBasis::from_pairs(pairs).expect("pair labels are distinct"))
    }

    /// Builds the differential from its values on the generators using
    /// `d(a x) = d0(a) x + (-1)^{|a|} a d(x)`.
    pub fn with_generator_diff(
        algebra: Arc<AlgebraSpec>,
        gens: Arc<GradedBasis>,
        values: &[SVec],
    ) -> Result<Self, ModuleError> {
        let m = ModuleSpec::new(algebra, gens, None)?;
        let mut diff = LinearMap::zero(m.qbasis.clone(), m.qbasis.clone(), -1);
        for k in 0..m.rank() {
            let v = values.get(k).cloned().unwrap_or_default();
            for (&t, _) in &v {
                if m.qbasis.degree(t) != m.gens.degree(k) - 1 {
                    return Err(ModuleError::ValueDegree(m.gens.label(k).to_string()));
                }
            }
            for i in 0..m.algebra.dim() {
                let src = m.index(i, k);
                let da = m.algebra.d(&m.algebra.basis_element(i));
                for (j, c) in da.iter().enumerate() {
                    if !c.is_zero() {
                        diff.add_to(m.index(j, k), src, c).map_err(|_| ModuleError::DiffDegree(-1))?;
                    }
                }
                let s = Rational::sign(parity_sign(m.algebra.degree(i)));
                for (t, c) in m.act(i, &v) {
                    diff.add_to(t, src, &(&s * &c)).map_err(|_| ModuleError::DiffDegree(-1))?;
                }
            }
        }
        Ok(ModuleSpec { diff, ..m })
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn generators(&self) -> &Arc<GradedBasis> {
        &self.gens
    }

    pub fn qbasis(&self) -> &Arc<GradedBasis> {
        &self.qbasis
    }

    pub fn diff(&self) -> &LinearMap {
        &self.diff
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.qbasis.len()
    }

    pub fn index(&self, a: usize, k: usize) -> usize {
        k * self.algebra.dim() + a
    }

    /// `(a, k)` for a rational basis index.
    pub fn split(&self, q: usize) -> (usize, usize) {
        (q % self.algebra.dim(), q / self.algebra.dim())
    }

    /// `a_m · v` for `v` over the rational basis of L.
    pub fn act(&self, m: usize, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&q, c) in v {
            let (i, k) = self.split(q);
            for (j, p) in self.algebra.mul_basis(m, i).iter().enumerate() {
                if !p.is_zero() {
                    crate::graded_core::linalg::add_entry(&mut out, self.index(j, k), &(c * p));
                }
            }
        }
        out
    }

    /// `a · v` for an algebra element `a`.
    pub fn act_element(&self, a: &Element, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (m, c) in a.iter().enumerate() {
            if !c.is_zero() {
                crate::graded_core::linalg::svec_add_scaled(&mut out, &self.act(m, v), c);
            }
        }
        out
    }

    pub fn d(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for ((t, s), c) in self.diff.entries() {
            if let Some(x) = v.get(s) {
                crate::graded_core::linalg::add_entry(&mut out, *t, &(c * x));
            }
        }
        out
    }

    /// Violations of `d∘d = 0` and of the dg-module rule, as label witnesses.
    pub fn validate(&self) -> Vec<(String, Vec<String>)> {
        let mut out = Vec::new();
        let lab = |q: usize| self.qbasis.label(q).to_string();
        for q in 0..self.dim() {
            let e: SVec = [(q, Rational::one())].into_iter().collect();
            if !self.d(&self.d(&e)).is_empty() {
                out.push(("module differential squares to zero".into(), vec![lab(q)]));
            }
        }
        for m in 0..self.algebra.dim() {
            let dm = self.algebra.d(&self.algebra.basis_element(m));
            let s = Rational::sign(parity_sign(self.algebra.degree(m)));
            for q in 0..self.dim() {
                let e: SVec = [(q, Rational::one())].into_iter().collect();
                let lhs = self.d(&self.act(m, &e));
                let mut rhs = self.act_element(&dm, &e);
                crate::graded_core::linalg::svec_add_scaled(&mut rhs, &self.act(m, &self.d(&e)), &s);
                if lhs != rhs {
                    out.push((
                        "dg-module rule".into(),
                        vec![self.algebra.basis().label(m).to_string(), lab(q)],
                    ));
                }
            }
        }
        out
    }
}
