//! Independent checks on runs and model instances.

mod convergence;
mod hypotheses;
mod mass;
mod monitor;
mod oscillation;
mod report;

pub use convergence::{
    run_refinement, self_convergence, ConvergenceReport, LevelInfo, QuantityOrder,
    RefinementAxis, RefinementPlan, Study, StudyCase,
};
pub use hypotheses::{
    hypothesis_diagnostics, HypothesisCheck, HypothesisReport, Sample, Status, HYPOTHESIS_TOL,
};
pub use mass::{
    least_squares_slope, mass_balance_slope, pairwise_sum, total_mass, total_mass_pairwise,
    MassLedger,
};
pub use monitor::{box_constraint_monitor, BoxMonitor, BoxReport, BOX_TOL};
pub use oscillation::{first_oscillation, prominence, Oscillation};
pub use report::ValidationReport;
