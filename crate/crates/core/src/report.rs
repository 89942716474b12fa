//! Validation reports: named condition violations with witness states.

use std::fmt;

use serde::Serialize;

/// A single violated condition with a witness assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Name of the violated condition, e.g. `"eq (1*=0)"` or `"(L2)"`.
    pub condition: String,
    /// Witness assignment as `(role, state)` pairs.
    pub witness: Vec<(String, String)>,
    pub message: String,
}

impl Violation {
    pub fn new(condition: &str, witness: Vec<(String, String)>, message: String) -> Violation {
        Violation {
            condition: condition.to_string(),
            witness,
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.message)?;
        if !self.witness.is_empty() {
            let parts: Vec<String> = self
                .witness
                .iter()
                .map(|(role, state)| format!("{role}={state}"))
                .collect();
            write!(f, " [{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Aggregate of all violations found by a (total) validation pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn ok() -> Report {
        Report::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// True if some violation's condition name contains `needle`.
    pub fn mentions(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.condition.contains(needle))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
