use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    /// Homological degree.
    pub degree: i64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BasisError {
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
}

/// Finite ordered list of graded generators with unique labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new(gens: Vec<Generator>) -> Result<Self, BasisError> {
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.label.clone(), i).is_some() {
                return Err(BasisError::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(GradedBasis { gens, index })
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Result<Self, BasisError> {
        Self::new(
            pairs
                .into_iter()
                .map(|(l, d)| Generator { label: l.into(), degree: d })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.gens[i].label
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn position(&self, label: &str) -> Result<usize, BasisError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| BasisError::UnknownLabel(label.to_string()))
    }

    /// Indices of generators of degree `d`, in basis order.
    pub fn in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.gens[i].degree == d).collect()
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.gens.iter().map(|g| g.degree).min()?;
        let hi = self.gens.iter().map(|g| g.degree).max()?;
        Some((lo, hi))
    }
}
