use std::collections::BTreeMap;
use std::sync::Arc;

use super::linalg::Matrix;
use super::{GradedBasis, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinearMapError {
    #[error("basis mismatch: {0}")]
    BasisMismatch(&'static str),
    #[error("entry ({target}, {src}) breaks degree {degree}: {tdeg} != {sdeg} + {degree}")]
    Degree { target: String, src: String, degree: i64, tdeg: i64, sdeg: i64 },
    #[error("index out of range")]
    OutOfRange,
}

/// Sparse homogeneous linear map between graded bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    source: Arc<GradedBasis>,
    target: Arc<GradedBasis>,
    degree: i64,
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Rank and kernel of a map restricted to one source degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBlock {
    pub rank: usize,
    /// Kernel vectors written over the full source basis.
    pub kernel: Vec<Vec<Rational>>,
    pub source_dim: usize,
}

impl LinearMap {
    pub fn zero(source: Arc<GradedBasis>, target: Arc<GradedBasis>, degree: i64) -> Self {
        LinearMap { source, target, degree, entries: BTreeMap::new() }
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        let entries = (0..basis.len()).map(|i| ((i, i), Rational::one())).collect();
        LinearMap { source: basis.clone(), target: basis, degree: 0, entries }
    }

    /// Builds a map from `(target, source, value)` triples, checking degrees.
    pub fn from_entries(
        source: Arc<GradedBasis>,
        target: Arc<GradedBasis>,
        degree: i64,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinearMapError> {
        let mut m = LinearMap::zero(source, target, degree);
        for (t, s, v) in entries {
            m.add_to(t, s, &v)?;
        }
        Ok(m)
    }

    pub fn source(&self) -> &Arc<GradedBasis> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedBasis> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.entries
    }

    pub fn get(&self, t: usize, s: usize) -> Rational {
        self.entries.get(&(t, s)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_to(&mut self, t: usize, s: usize, v: &Rational) -> Result<(), LinearMapError> {
        if t >= self.target.len() || s >= self.source.len() {
            return Err(LinearMapError::OutOfRange);
        }
        if v.is_zero() {
            return Ok(());
        }
        let (tdeg, sdeg) = (self.target.degree(t), self.source.degree(s));
        if tdeg != sdeg + self.degree {
            return Err(LinearMapError::Degree {
                target: self.target.label(t).to_string(),
                src: self.source.label(s).to_string(),
                degree: self.degree,
                tdeg,
                sdeg,
            });
        }
        let e = self.entries.entry((t, s)).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(t, s));
        }
        Ok(())
    }

    /// Applies the map to a dense coordinate vector over the source basis.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.target.len()];
        for ((t, s), a) in &self.entries {
            if !v[*s].is_zero() {
                out[*t] += a * &v[*s];
            }
        }
        out
    }

    /// Image of the `s`-th source generator as a dense vector.
    pub fn column(&self, s: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.target.len()];
        for ((t, s2), a) in &self.entries {
            if *s2 == s {
                out[*t] = a.clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LinearMap {
        let mut m = LinearMap::zero(self.source.clone(), self.target.clone(), self.degree);
        if !c.is_zero() {
            m.entries = self.entries.iter().map(|(k, v)| (*k, v * c)).collect();
        }
        m
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, LinearMapError> {
        if self.source != other.source || self.target != other.target {
            return Err(LinearMapError::BasisMismatch("summands have different bases"));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(LinearMapError::BasisMismatch("summands have different degrees"));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut m = LinearMap { degree, ..self.clone() };
        for ((t, s), v) in &other.entries {
            m.add_to(*t, *s, v)?;
        }
        Ok(m)
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.len(), self.source.len());
        for ((t, s), v) in &self.entries {
            m.set(*t, *s, v.clone());
        }
        m
    }

    /// Per source degree in `[dmin, dmax]`: rank and kernel basis.
    pub fn rank_and_kernel(&self, dmin: i64, dmax: i64) -> BTreeMap<i64, DegreeBlock> {
        let mut out = BTreeMap::new();
        for d in dmin..=dmax {
            let cols = self.source.in_degree(d);
            let rows = self.target.in_degree(d + self.degree);
            let mut m = Matrix::zeros(rows.len(), cols.len());
            for (i, &t) in rows.iter().enumerate() {
                for (j, &s) in cols.iter().enumerate() {
                    if let Some(v) = self.entries.get(&(t, s)) {
                        m.set(i, j, v.clone());
                    }
                }
            }
            let ker = m.kernel();
            let rank = cols.len() - ker.len();
            let kernel = ker
                .into_iter()
                .map(|k| {
                    let mut v = vec![Rational::zero(); self.source.len()];
                    for (j, &s) in cols.iter().enumerate() {
                        v[s] = k[j].clone();
                    }
                    v
                })
                .collect();
            out.insert(d, DegreeBlock { rank, kernel, source_dim: cols.len() });
        }
        out
    }
}

/// `f ∘ g`.
pub fn compose(f: &LinearMap, g: &LinearMap) -> Result<LinearMap, LinearMapError> {
    if g.target != f.source {
        return Err(LinearMapError::BasisMismatch("g.target != f.source"));
    }
    let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
    for ((t, s), v) in &f.entries {
        by_row.entry(*s).or_default().push((*t, v));
    }
    let mut out = LinearMap::zero(g.source.clone(), f.target.clone(), f.degree + g.degree);
    for ((mid, s), b) in &g.entries {
        if let Some(col) = by_row.get(mid) {
            for (t, a) in col {
                let v = *a * b;
                let e = out.entries.entry((*t, *s)).or_insert_with(Rational::zero);
                *e += &v;
            }
        }
    }
    out.entries.retain(|_, v| !v.is_zero());
    Ok(out)
}
