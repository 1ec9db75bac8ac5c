use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::Grid1D;
use crate::integrator::RunRecord;
use crate::model::{DimensionlessParams, SimState, NEURITES};

/// Total vesicle count: neurite contents, pools, and the membrane built into
/// the current lengths (`c_growth * L` cone units per neurite).
pub fn total_mass(state: &SimState, grid: &Grid1D, p: &DimensionlessParams) -> f64 {
    let u = &p.mass_units;
    let mut m = u.soma * state.lambda_som;
    for j in 0..NEURITES {
        let field = &state.fields[j];
        let mut sum = 0.0;
        for k in 0..field.n_cells() {
            sum += field.f_plus[k] + field.f_minus[k];
        }
        m += u.density * grid.h() * state.lengths[j] * sum;
        m += u.cone * (state.lambda[j] + p.c_growth[j] * state.lengths[j]);
    }
    m
}

/// Same quantity as [`total_mass`] with pairwise (tree) reduction of the
/// cell sums.
pub fn total_mass_pairwise(state: &SimState, grid: &Grid1D, p: &DimensionlessParams) -> f64 {
    let u = &p.mass_units;
    let mut parts = vec![u.soma * state.lambda_som];
    for j in 0..NEURITES {
        let field = &state.fields[j];
        let rho: Vec<f64> = field
            .f_plus
            .iter()
            .zip(&field.f_minus)
            .map(|(a, b)| a + b)
            .collect();
        parts.push(u.density * grid.h() * state.lengths[j] * pairwise_sum(&rho));
        parts.push(u.cone * state.lambda[j]);
        parts.push(u.cone * p.c_growth[j] * state.lengths[j]);
    }
    pairwise_sum(&parts)
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Balance residual of a run and, across refinement levels, its decay rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassLedger {
    pub m0: f64,
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub residual: Vec<f64>,
}

impl MassLedger {
    pub fn from_record(record: &RunRecord) -> Self {
        MassLedger {
            m0: record.mass.first().copied().unwrap_or(0.0),
            times: record.times.clone(),
            mass: record.mass.clone(),
            residual: record.mass_residual.clone(),
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.max_residual() / self.m0.abs().max(f64::MIN_POSITIVE)
    }
}

/// Least-squares slope of `log(max residual)` against `log(h)` over runs on
/// successively refined grids.
pub fn mass_balance_slope(levels: &[(f64, &RunRecord)]) -> Result<f64> {
    if levels.len() < 2 {
        return Err(Error::Refinement(
            "mass balance slope needs at least two refinement levels".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .map(|(h, r)| (h.ln(), r.max_mass_residual().max(f64::MIN_POSITIVE).ln()))
        .collect();
    Ok(least_squares_slope(&pts))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
