use serde::{Deserialize, Serialize};

use crate::integrator::{Observer, RunRecord};
use crate::model::SimState;

/// Slack allowed below zero and above the density cap.
pub const BOX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxReport {
    pub min_density: f64,
    pub max_rho: f64,
    pub rho_cap: f64,
    pub tol: f64,
    /// Earliest time at which either bound was exceeded by more than `tol`.
    pub first_violation: Option<f64>,
}

impl BoxReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Box constraints over a finished run.
///
/// The extremes are taken over every step. The violation time is the first
/// sampled time outside the box, or the time of the extreme when only an
/// unsampled step left it.
pub fn box_constraint_monitor(record: &RunRecord, tol: f64) -> BoxReport {
    let ex = &record.extremes;
    let cap = record.rho_cap;
    let outside = |min: f64, max: f64| min < -tol || max > cap + tol;
    let sampled = record
        .times
        .iter()
        .zip(record.min_density.iter().zip(&record.max_rho))
        .find(|(_, (lo, hi))| outside(**lo, **hi))
        .map(|(t, _)| *t);
    let first_violation = sampled.or_else(|| {
        let mut times = Vec::new();
        if ex.min_density < -tol {
            times.push(ex.min_density_time);
        }
        if ex.max_rho > cap + tol {
            times.push(ex.max_rho_time);
        }
        times.into_iter().reduce(f64::min)
    });
    BoxReport {
        min_density: ex.min_density,
        max_rho: ex.max_rho,
        rho_cap: cap,
        tol,
        first_violation,
    }
}

/// Step-by-step box monitor, attachable to a run as an observer.
#[derive(Debug, Clone)]
pub struct BoxMonitor {
    report: BoxReport,
}

impl BoxMonitor {
    pub fn new(rho_cap: f64, tol: f64) -> Self {
        BoxMonitor {
            report: BoxReport {
                min_density: f64::INFINITY,
                max_rho: f64::NEG_INFINITY,
                rho_cap,
                tol,
                first_violation: None,
            },
        }
    }

    pub fn check(&mut self, state: &SimState) {
        let r = &mut self.report;
        let (lo, hi) = (state.min_density(), state.max_rho());
        r.min_density = r.min_density.min(lo);
        r.max_rho = r.max_rho.max(hi);
        if r.first_violation.is_none() && (lo < -r.tol || hi > r.rho_cap + r.tol) {
            r.first_violation = Some(state.time);
        }
    }

    pub fn report(&self) -> BoxReport {
        self.report
    }
}

impl Observer for BoxMonitor {
    fn observe(&mut self, _step: u64, state: &SimState) {
        self.check(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{run, StepperConfig};
    use crate::model::{ModelFunctions, NeuriteField};
    use crate::model::presets::{setup, Preset};

    fn cfg(t_end: f64) -> StepperConfig {
        StepperConfig {
            tau: 1e-3,
            t_end,
            stationarity_tol: 0.0,
            sample_stride: 10,
            ..Default::default()
        }
    }

    #[test]
    fn still_run_has_no_violation() {
        let s = setup(Preset::ExperimentOne);
        let mut st = s.initial.to_state(11);
        for f in st.fields.iter_mut() {
            *f = NeuriteField::zeros(11);
        }
        let rec = run(&st, &cfg(0.05), &ModelFunctions::closed(), &s.params, &mut []).unwrap();
        let b = box_constraint_monitor(&rec, BOX_TOL);
        assert_eq!((b.min_density, b.max_rho, b.first_violation), (0.0, 0.0, None));
    }

    #[test]
    fn overfull_start_is_flagged_at_zero() {
        let s = setup(Preset::ExperimentOne);
        let mut st = s.initial.to_state(11);
        let over = 0.75 * s.params.rho_cap;
        for f in st.fields.iter_mut() {
            *f = NeuriteField::uniform(11, over, over);
        }
        let mut monitor = BoxMonitor::new(s.params.rho_cap, BOX_TOL);
        let rec = run(&st, &cfg(0.01), &ModelFunctions::closed(), &s.params, &mut [&mut monitor])
            .unwrap();
        let b = box_constraint_monitor(&rec, BOX_TOL);
        assert_eq!(b.first_violation, Some(0.0));
        assert!(!b.holds());
        assert_eq!(monitor.report().first_violation, Some(0.0));
    }
}
