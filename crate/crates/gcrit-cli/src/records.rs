//! Flat result records shared by every output format.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundType {
    Upper,
    Lower,
    Exact,
}

impl BoundType {
    pub fn label(&self) -> &'static str {
        match self {
            BoundType::Upper => "upper",
            BoundType::Lower => "lower",
            BoundType::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Sequence,
    ClosedForm,
    Oracle,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Sequence => "sequence",
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
        }
    }
}

/// One bound (or exact value) for one potential and partial wave.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub potential: String,
    pub ell: u32,
    pub method: String,
    /// Iteration index for sequence methods, absent for closed forms.
    pub n: Option<usize>,
    pub value: f64,
    pub bound_type: BoundType,
    pub provenance: Provenance,
}

pub const CSV_HEADER: &str = "potential,ell,method,n,value,bound_type,provenance";

impl ResultRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.12e},{},{}",
            self.potential,
            self.ell,
            self.method,
            self.n.map_or(String::new(), |n| n.to_string()),
            self.value,
            self.bound_type.label(),
            self.provenance.label()
        )
    }

    pub fn text_line(&self) -> String {
        let n = self.n.map_or("  -".to_string(), |n| format!("{n:3}"));
        format!(
            "{:<12} l={} {:<12} n={} {:>14.8} {:<5} ({})",
            self.potential,
            self.ell,
            self.method,
            n,
            self.value,
            self.bound_type.label(),
            self.provenance.label()
        )
    }
}
