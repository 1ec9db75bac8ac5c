use serde::{Deserialize, Serialize};

use crate::model::{NeuriteField, SimState, NEURITES};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTEnd,
    Stationary,
    MaxSteps,
}

/// Density profiles and scalars captured at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: u64,
    pub time: f64,
    pub lengths: [f64; NEURITES],
    pub lambda_som: f64,
    pub lambda: [f64; NEURITES],
    pub fields: [NeuriteField; NEURITES],
}

impl Snapshot {
    pub fn of(step: u64, state: &SimState) -> Self {
        Snapshot {
            step,
            time: state.time,
            lengths: state.lengths,
            lambda_som: state.lambda_som,
            lambda: state.lambda,
            fields: state.fields.clone(),
        }
    }
}

/// Extremes observed over every step of a run, not only the sampled ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunExtremes {
    pub min_density: f64,
    pub min_density_time: f64,
    pub max_rho: f64,
    pub max_rho_time: f64,
    pub min_length: [f64; NEURITES],
    pub min_pool: f64,
}

impl RunExtremes {
    pub(crate) fn start(state: &SimState) -> Self {
        RunExtremes {
            min_density: state.min_density(),
            min_density_time: state.time,
            max_rho: state.max_rho(),
            max_rho_time: state.time,
            min_length: state.lengths,
            min_pool: state.lambda_som.min(state.lambda[0]).min(state.lambda[1]),
        }
    }

    pub(crate) fn update(&mut self, state: &SimState) {
        let m = state.min_density();
        if m < self.min_density {
            self.min_density = m;
            self.min_density_time = state.time;
        }
        let r = state.max_rho();
        if r > self.max_rho {
            self.max_rho = r;
            self.max_rho_time = state.time;
        }
        for j in 0..NEURITES {
            self.min_length[j] = self.min_length[j].min(state.lengths[j]);
        }
        self.min_pool = self
            .min_pool
            .min(state.lambda_som)
            .min(state.lambda[0])
            .min(state.lambda[1]);
    }
}

/// Time series of a run on a common, strictly increasing time axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub times: Vec<f64>,
    pub steps: Vec<u64>,
    pub lengths: [Vec<f64>; NEURITES],
    pub lambda_som: Vec<f64>,
    pub lambda: [Vec<f64>; NEURITES],
    /// Total vesicle count including membrane stored in the lengths.
    pub mass: Vec<f64>,
    /// `|m(t) - m0 - produced(t)|`.
    pub mass_residual: Vec<f64>,
    pub min_density: Vec<f64>,
    pub max_rho: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub extremes: RunExtremes,
    pub termination: Termination,
    pub final_state: SimState,
    pub total_steps: u64,
    pub tau: f64,
    pub rho_cap: f64,
    /// Non-fatal findings such as negative boundary fluxes.
    pub diagnostics: Vec<String>,
}

impl RunRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_mass_residual(&self) -> f64 {
        self.mass_residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Receives every accepted step of a run.
pub trait Observer {
    fn observe(&mut self, step: u64, state: &SimState);
}

impl<F: FnMut(u64, &SimState)> Observer for F {
    fn observe(&mut self, step: u64, state: &SimState) {
        self(step, state)
    }
}
