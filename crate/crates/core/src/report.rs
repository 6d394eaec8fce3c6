use serde::Serialize;

/// One labelled contribution or diagnostic attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

/// Interference shift of the incident electron, split into the conventional
/// AB part and the supplementary part contributed by the shield.
///
/// `total` is always `ab + supplementary`; `terms` carries provenance and
/// diagnostics that do not enter the total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseShiftReport {
    pub ab: f64,
    pub supplementary: f64,
    pub total: f64,
    pub terms: Vec<Term>,
}

impl PhaseShiftReport {
    pub fn new(ab: f64, supplementary: f64) -> Self {
        Self {
            ab,
            supplementary,
            total: ab + supplementary,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, label: impl Into<String>, value: f64) -> Self {
        self.terms.push(Term {
            label: label.into(),
            value,
        });
        self
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.value)
    }
}
