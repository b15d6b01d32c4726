use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::convolution::CohomologyEntry;
use crate::structures::Issue;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// Lowest failing level, when the identity is graded by level.
    pub first_failure: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub check: String,
    pub level: usize,
    pub word: String,
    pub slot: String,
    pub value: String,
}

impl ResidualEntry {
    pub fn from_issue(issue: &Issue) -> Self {
        let mut w = issue.witness.iter();
        ResidualEntry {
            check: issue.check.clone(),
            level: issue.level,
            word: w.next().cloned().unwrap_or_default(),
            slot: w.cloned().collect::<Vec<_>>().join(", "),
            value: issue.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub degree: i64,
    pub dim: usize,
    pub betti: usize,
    pub flagged: bool,
}

impl From<&CohomologyEntry> for BettiEntry {
    fn from(e: &CohomologyEntry) -> Self {
        BettiEntry { degree: e.degree, dim: e.dim, betti: e.betti, flagged: e.flagged }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: String,
    pub kind: String,
    pub certified_w: usize,
    pub statement: String,
    pub verdicts: Vec<Verdict>,
    pub residuals: Vec<ResidualEntry>,
    pub betti: Vec<BettiEntry>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, instance: &str, kind: &str, w: usize) -> Self {
        Report {
            command: command.into(),
            instance: instance.into(),
            kind: kind.into(),
            certified_w: w,
            statement: format!("verified up to word length W = {w}"),
            verdicts: Vec::new(),
            residuals: Vec::new(),
            betti: Vec::new(),
            timing_ms: 0,
        }
    }

    /// Records a verdict that fails iff `issues` is nonempty.
    pub fn verdict(&mut self, name: &str, issues: &[Issue]) {
        self.verdicts.push(Verdict {
            name: name.into(),
            passed: issues.is_empty(),
            first_failure: issues.iter().map(|i| i.level).min(),
        });
        self.residuals.extend(issues.iter().map(ResidualEntry::from_issue));
    }

    pub fn flag(&mut self, name: &str, passed: bool) {
        self.verdicts.push(Verdict { name: name.into(), passed, first_failure: None });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn render_json(&self) -> String {
        super::format::emit_value(&self.to_json())
    }

    pub fn render_human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} ({})", self.command, self.instance, self.kind);
        let _ = writeln!(s, "{}", self.statement);
        for v in &self.verdicts {
            let mark = if v.passed { "PASS" } else { "FAIL" };
            match v.first_failure {
                Some(j) => {
                    let _ = writeln!(s, "  {mark}  {} (first failing level {j})", v.name);
                }
                None => {
                    let _ = writeln!(s, "  {mark}  {}", v.name);
                }
            }
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(s, "residuals:");
            for r in &self.residuals {
                let _ = writeln!(
                    s,
                    "  level {}  {}  word {}  slot [{}]  value {}",
                    r.level,
                    r.check,
                    r.word,
                    r.slot,
                    if r.value.is_empty() { "-" } else { &r.value }
                );
            }
        }
        if !self.betti.is_empty() {
            let _ = writeln!(s, "cohomology:");
            for b in &self.betti {
                let _ = writeln!(
                    s,
                    "  degree {}  dim {}  betti {}{}",
                    b.degree,
                    b.dim,
                    b.betti,
                    if b.flagged { "  (flagged)" } else { "" }
                );
            }
        }
        let _ = writeln!(s, "time {} ms", self.timing_ms);
        let _ = write!(s, "verdict {}", if self.passed() { "pass" } else { "fail" });
        s.push('\n');
        s
    }
}
