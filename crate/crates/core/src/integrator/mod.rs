//! Implicit–explicit time integration and the per-step update chain.

mod record;
mod scalar;
mod stepper;

pub use record::{Observer, RunExtremes, RunRecord, Snapshot, Termination};
pub use scalar::{solve_backward_euler, NewtonSettings};
pub use stepper::{initial_length_rates, run, Stepper, StepperConfig};
