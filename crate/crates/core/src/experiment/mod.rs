//! Configuration files, run orchestration and on-disk artifacts.

mod config;
pub mod output;
mod run;

pub use config::{
    check_initial_data, default_stationary_growth, load_config, parse_config, ExperimentConfig,
    OutputSpec, StationarySpec, DEFAULT_CELLS,
};
pub use run::{
    output_root, run_convergence, run_experiment, run_stationary, run_sweep, state_drift,
    RunOutcome, RunReport, StationaryOutcome, OUTPUT_ROOT_ENV,
};
