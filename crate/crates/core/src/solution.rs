//! Solution file format.

use serde::{Deserialize, Serialize};

use crate::approx::SolveReport;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mapping::{score_mapping, Mapping};

pub const FORMAT_VERSION: u32 = 1;

/// Rounds to 12 significant digits, the precision written to files.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedEntry {
    pub s1_duo: usize,
    pub s2_duo: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format_version: u32,
    pub selected: Vec<SelectedEntry>,
    /// 1-based permutation; null for relaxed instances.
    pub mapping: Option<Vec<usize>>,
    pub preserved: Vec<usize>,
    pub selected_weight: f64,
    pub realized_weight: f64,
    pub lp_objective: f64,
    pub guarantee: f64,
}

impl SolutionFile {
    pub fn from_report(report: &SolveReport) -> Self {
        SolutionFile {
            format_version: FORMAT_VERSION,
            selected: report
                .selected
                .iter()
                .map(|p| SelectedEntry {
                    s1_duo: p.s1_duo,
                    s2_duo: p.s2_duo,
                    weight: round_sig(p.weight),
                })
                .collect(),
            mapping: report.mapping.as_ref().map(|m| m.perm().to_vec()),
            preserved: report.preserved.clone(),
            selected_weight: round_sig(report.selected_weight),
            realized_weight: round_sig(report.realized_weight),
            lp_objective: round_sig(report.lp_objective),
            guarantee: round_sig(report.guarantee),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("solution serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Re-scores the stored mapping and checks it reproduces
    /// `realized_weight` and `preserved` exactly.
    pub fn rescore(&self, instance: &Instance) -> Result<bool> {
        let Some(perm) = &self.mapping else {
            return Err(Error::RelaxedInstance("re-scoring"));
        };
        let mapping = Mapping::new(instance, perm.clone())?;
        let score = score_mapping(instance, &mapping);
        Ok(round_sig(score.realized_weight) == self.realized_weight
            && score.preserved == self.preserved)
    }
}
