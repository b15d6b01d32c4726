//! Lie-Rinehart, sh Lie-Rinehart and quasi Lie-Rinehart data, their checks,
//! and the passage to and from multi derivation structures.

mod lr;
mod quasi;
mod sh;

pub use lr::{check_lie_rinehart, LieRinehartData};
pub use quasi::{
    build_quasi_mc, jacobi_defect_identity, quasi_literal_operators, quasi_to_sh, solve_quasi_constraints,
    JacobiDefectReport,
    QuasiLieRinehartData,
};
use crate::graded_core::Rational;

pub use sh::{
    build_maurer_cartan, extend_corestrictions, extend_twisting, extract_structure, DataError, Extraction,
    MaurerCartanError, ShLieRinehartData,
};

/// One failed identity with the basis elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub check: String,
    pub level: usize,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RouteOutcome {
    pub issues: Vec<Issue>,
}

impl RouteOutcome {
    pub fn new(issues: Vec<Issue>) -> Self {
        RouteOutcome { issues }
    }

    pub fn passes(&self) -> bool {
        self.issues.is_empty()
    }

    /// Lowest level at which an identity fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.issues.iter().map(|i| i.level).min()
    }
}

/// Both verification routes for an sh Lie-Rinehart pair.
#[derive(Debug, Clone)]
pub struct ShCheckReport {
    pub direct: RouteOutcome,
    pub maurer_cartan: RouteOutcome,
}

impl ShCheckReport {
    pub fn passes(&self) -> bool {
        self.direct.passes() && self.maurer_cartan.passes()
    }

    pub fn routes_agree(&self) -> bool {
        self.direct.first_failure() == self.maurer_cartan.first_failure()
    }
}

pub fn check_sh_lie_rinehart(data: &ShLieRinehartData) -> ShCheckReport {
    ShCheckReport { direct: data.route_a(), maurer_cartan: data.route_b() }
}

/// Renders `Σ c·label` as `2 x - y + 1/2 z`, or `0` when empty.
pub fn render_terms(terms: impl IntoIterator<Item = (String, Rational)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c < Rational::zero();
        let mag = c.abs();
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests;
