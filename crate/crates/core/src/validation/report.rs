use serde::{Deserialize, Serialize};

use super::{
    box_constraint_monitor, hypothesis_diagnostics, BoxReport, HypothesisReport, MassLedger,
    BOX_TOL,
};
use crate::integrator::{RunRecord, Termination};
use crate::model::{DimensionlessParams, ModelFunctions, NEURITES};

/// Machine-readable summary written next to the series of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub termination: Termination,
    pub steps: u64,
    pub t_final: f64,
    pub final_lengths: [f64; NEURITES],
    pub min_lengths: [f64; NEURITES],
    pub box_constraints: BoxReport,
    pub mass_m0: f64,
    pub max_mass_residual: f64,
    pub max_relative_mass_residual: f64,
    pub hypotheses: HypothesisReport,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn from_run(record: &RunRecord, mf: &ModelFunctions, p: &DimensionlessParams) -> Self {
        let ledger = MassLedger::from_record(record);
        ValidationReport {
            termination: record.termination,
            steps: record.total_steps,
            t_final: record.final_state.time,
            final_lengths: record.final_state.lengths,
            min_lengths: record.extremes.min_length,
            box_constraints: box_constraint_monitor(record, BOX_TOL),
            mass_m0: ledger.m0,
            max_mass_residual: ledger.max_residual(),
            max_relative_mass_residual: ledger.max_relative_residual(),
            hypotheses: hypothesis_diagnostics(mf, p),
            diagnostics: record.diagnostics.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
