//! Self-convergence on nested refinement levels.
//!
//! Observed orders come from successive differences: with `q_i` a quantity
//! on level `i` and refinement ratio `r`, the differences
//! `d_i = |q_i - q_{i+1}|` decay like `r^(-p i)`. Densities are compared in
//! the discrete L2 norm after projecting both levels onto the coarsest grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{run, RunRecord, StepperConfig};
use crate::model::{
    project_cells, DimensionlessParams, GrowthLaw, InitialData, ModelFunctions, Production,
    Profile, SimState, NEURITES,
};

use super::mass::least_squares_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefinementAxis {
    Space,
    Time,
    /// Cells and steps refined together.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelInfo {
    pub n_cells: usize,
    pub tau: f64,
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityOrder {
    pub name: String,
    pub differences: Vec<f64>,
    /// Order between each pair of successive differences.
    pub pairwise: Vec<f64>,
    /// Least-squares order over all differences; `None` if any difference
    /// vanishes.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub axis: RefinementAxis,
    pub ratio: f64,
    pub levels: Vec<LevelInfo>,
    pub quantities: Vec<QuantityOrder>,
}

impl ConvergenceReport {
    pub fn quantity(&self, name: &str) -> Option<&QuantityOrder> {
        self.quantities.iter().find(|q| q.name == name)
    }

    pub fn order(&self, name: &str) -> Option<f64> {
        self.quantity(name).and_then(|q| q.order)
    }
}

fn level_of(r: &RunRecord) -> LevelInfo {
    LevelInfo {
        n_cells: r.final_state.n_cells(),
        tau: r.tau,
        t_final: r.final_state.time,
    }
}

/// Checks that the levels are nested with one common ratio and returns the
/// refinement axis and ratio.
fn classify(levels: &[LevelInfo]) -> Result<(RefinementAxis, f64)> {
    if levels.len() < 3 {
        return Err(Error::Refinement(format!(
            "need at least 3 levels, got {}",
            levels.len()
        )));
    }
    let t_end = levels[0].t_final;
    let mut found: Option<(RefinementAxis, f64)> = None;
    for (i, w) in levels.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if (a.t_final - t_end).abs() > 1e-9 * t_end.abs().max(1.0)
            || (b.t_final - t_end).abs() > 1e-9 * t_end.abs().max(1.0)
        {
            return Err(Error::Refinement(format!(
                "levels end at different times ({} and {})",
                a.t_final, b.t_final
            )));
        }
        let space = if b.n_cells == a.n_cells {
            None
        } else if b.n_cells > a.n_cells && b.n_cells % a.n_cells == 0 {
            Some((b.n_cells / a.n_cells) as f64)
        } else {
            return Err(Error::Refinement(format!(
                "grids of {} and {} cells are not nested",
                a.n_cells, b.n_cells
            )));
        };
        let t_ratio = a.tau / b.tau;
        let time = if (t_ratio - 1.0).abs() < 1e-12 {
            None
        } else if t_ratio > 1.0 && (t_ratio - t_ratio.round()).abs() < 1e-9 {
            Some(t_ratio.round())
        } else {
            return Err(Error::Refinement(format!(
                "time steps {} and {} are not nested",
                a.tau, b.tau
            )));
        };
        let this = match (space, time) {
            (Some(s), None) => (RefinementAxis::Space, s),
            (None, Some(t)) => (RefinementAxis::Time, t),
            (Some(s), Some(t)) if s == t => (RefinementAxis::Both, s),
            (Some(s), Some(t)) => {
                return Err(Error::Refinement(format!(
                    "level {i}: space ratio {s} differs from time ratio {t}"
                )))
            }
            (None, None) => {
                return Err(Error::Refinement(format!("levels {i} and {} coincide", i + 1)))
            }
        };
        match found {
            None => found = Some(this),
            Some(prev) if prev == this => {}
            Some(prev) => {
                return Err(Error::Refinement(format!(
                    "level {i}: refinement {this:?} differs from {prev:?}"
                )))
            }
        }
    }
    Ok(found.expect("at least two pairs"))
}

fn orders(name: &str, values: &[f64], ratio: f64) -> QuantityOrder {
    let differences: Vec<f64> = values.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    diff_orders(name, differences, ratio)
}

fn diff_orders(name: &str, differences: Vec<f64>, ratio: f64) -> QuantityOrder {
    let pairwise = differences
        .windows(2)
        .map(|w| (w[0] / w[1]).ln() / ratio.ln())
        .collect();
    let order = if differences.iter().all(|d| *d > 0.0 && d.is_finite()) {
        let pts: Vec<(f64, f64)> = differences
            .iter()
            .enumerate()
            .map(|(i, d)| (i as f64, d.ln()))
            .collect();
        Some(-least_squares_slope(&pts) / ratio.ln())
    } else {
        None
    };
    QuantityOrder {
        name: name.to_string(),
        differences,
        pairwise,
        order,
    }
}

/// Discrete L2 distance of all density vectors of two states on the grid of
/// `coarse_cells`, lengths included (`sqrt(sum_j L_j h sum_k d^2)`).
fn density_distance(a: &SimState, b: &SimState, coarse_cells: usize) -> f64 {
    let h = 1.0 / coarse_cells as f64;
    let mut acc = 0.0;
    for j in 0..NEURITES {
        let pairs = [
            (&a.fields[j].f_plus, &b.fields[j].f_plus),
            (&a.fields[j].f_minus, &b.fields[j].f_minus),
        ];
        let len = 0.5 * (a.lengths[j] + b.lengths[j]);
        for (u, v) in pairs {
            let (u, v) = (project_cells(u, coarse_cells), project_cells(v, coarse_cells));
            acc += len * h * u.iter().zip(&v).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        }
    }
    acc.sqrt()
}

/// Observed orders of `L_j(T)`, the pool levels and the densities over runs
/// ordered from coarsest to finest.
pub fn self_convergence(records: &[RunRecord]) -> Result<ConvergenceReport> {
    let levels: Vec<LevelInfo> = records.iter().map(level_of).collect();
    let (axis, ratio) = classify(&levels)?;
    let finals: Vec<&SimState> = records.iter().map(|r| &r.final_state).collect();
    let series = |f: &dyn Fn(&SimState) -> f64| finals.iter().map(|s| f(s)).collect::<Vec<_>>();

    let mut quantities = vec![
        orders("L1", &series(&|s| s.lengths[0]), ratio),
        orders("L2", &series(&|s| s.lengths[1]), ratio),
        orders("lambda_som", &series(&|s| s.lambda_som), ratio),
        orders("lambda1", &series(&|s| s.lambda[0]), ratio),
        orders("lambda2", &series(&|s| s.lambda[1]), ratio),
    ];
    let coarse = levels[0].n_cells;
    let density = finals
        .windows(2)
        .map(|w| density_distance(w[0], w[1], coarse))
        .collect();
    quantities.push(diff_orders("density", density, ratio));
    Ok(ConvergenceReport {
        axis,
        ratio,
        levels,
        quantities,
    })
}

/// Refined copies of a base configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementPlan {
    pub axis: RefinementAxis,
    pub base_cells: usize,
    pub base_tau: f64,
    pub levels: usize,
    pub ratio: usize,
}

impl RefinementPlan {
    pub fn level(&self, i: usize) -> (usize, f64) {
        let r = self.ratio.pow(i as u32);
        match self.axis {
            RefinementAxis::Space => (self.base_cells * r, self.base_tau),
            RefinementAxis::Time => (self.base_cells, self.base_tau / r as f64),
            RefinementAxis::Both => (self.base_cells * r, self.base_tau / r as f64),
        }
    }
}

/// Runs every level of `plan` on its own thread, scaling the sampling
/// stride so each level is sampled at the same times.
pub fn run_refinement(
    initial: &InitialData,
    mf: &ModelFunctions,
    p: &DimensionlessParams,
    cfg: &StepperConfig,
    plan: &RefinementPlan,
) -> Result<Vec<RunRecord>> {
    if plan.levels < 3 || plan.ratio < 2 {
        return Err(Error::Refinement(format!(
            "need at least 3 levels and ratio >= 2, got {} levels, ratio {}",
            plan.levels, plan.ratio
        )));
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..plan.levels)
            .map(|i| {
                let (n, tau) = plan.level(i);
                let steps_factor = (cfg.tau / tau).round().max(1.0) as u64;
                let level_cfg = StepperConfig {
                    tau,
                    stationarity_tol: 0.0,
                    sample_stride: cfg.sample_stride * steps_factor,
                    ..cfg.clone()
                };
                let state = initial.to_state(n);
                scope.spawn(move || run(&state, &level_cfg, mf, p, &mut []))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement level panicked"))
            .collect()
    })
}

/// Smooth configurations with known expected orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyCase {
    /// Closed neurites of fixed length, no motor transport.
    PureDiffusion,
    /// Closed neurites of fixed length, no diffusion.
    PureTransport,
    /// Empty neurites, soma production and cone-driven growth only.
    PoolOde,
}

/// Everything needed to run a [`StudyCase`].
#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub initial: InitialData,
    pub functions: ModelFunctions,
    pub params: DimensionlessParams,
    pub stepper: StepperConfig,
    pub plan: RefinementPlan,
    /// Quantity whose order is the figure of merit.
    pub quantity: &'static str,
    pub expected_order: f64,
}

impl StudyCase {
    pub const ALL: [StudyCase; 3] = [
        StudyCase::PureDiffusion,
        StudyCase::PureTransport,
        StudyCase::PoolOde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyCase::PureDiffusion => "pure-diffusion",
            StudyCase::PureTransport => "pure-transport",
            StudyCase::PoolOde => "pool-ode",
        }
    }

    pub fn study(self, levels: usize) -> Study {
        let base = crate::model::presets::setup(crate::model::presets::Preset::Section4Linear).params;
        let bump = Profile::Cosine {
            mean: 0.3,
            amplitude: 0.2,
        };
        let initial = InitialData {
            lengths: [1.0, 1.0],
            lambda_som: 1.0,
            lambda: [1.0, 1.0],
            f_plus: [bump.clone(), bump.clone()],
            f_minus: [bump.clone(), bump],
        };
        match self {
            StudyCase::PureDiffusion => Study {
                initial,
                functions: ModelFunctions::closed(),
                params: DimensionlessParams {
                    kappa_v: 0.0,
                    kappa_lambda: 0.0,
                    ..base
                },
                stepper: StepperConfig {
                    tau: 1e-3,
                    t_end: 1.0,
                    stationarity_tol: 0.0,
                    sample_stride: 100,
                    ..Default::default()
                },
                plan: RefinementPlan {
                    axis: RefinementAxis::Space,
                    base_cells: 25,
                    base_tau: 1e-3,
                    levels,
                    ratio: 2,
                },
                quantity: "density",
                expected_order: 2.0,
            },
            StudyCase::PureTransport => {
                // Bumps away from the walls, so nothing reaches a closed end
                // before `t_end`.
                let fine = plan_cells(25, levels) * 16;
                let bump = Profile::Table(cell_averages(fine, |y| {
                    let z = (y - 0.5) / 0.3;
                    if z.abs() < 1.0 {
                        0.3 * (1.0 - z * z).powi(4)
                    } else {
                        0.0
                    }
                }));
                Study {
                    initial: InitialData {
                        f_plus: [bump.clone(), bump.clone()],
                        f_minus: [bump.clone(), bump],
                        ..initial
                    },
                    functions: ModelFunctions::closed(),
                    params: DimensionlessParams {
                        kappa_d: 0.0,
                        kappa_lambda: 0.0,
                        ..base
                    },
                    stepper: StepperConfig {
                        tau: 1e-2,
                        t_end: 0.05,
                        stationarity_tol: 0.0,
                        sample_stride: 1,
                        ..Default::default()
                    },
                    plan: RefinementPlan {
                        axis: RefinementAxis::Both,
                        base_cells: 25,
                        base_tau: 1e-2,
                        levels,
                        ratio: 2,
                    },
                    quantity: "density",
                    expected_order: 1.0,
                }
            }
            StudyCase::PoolOde => {
                let mut functions = ModelFunctions::closed();
                functions.gamma = Production::Decaying {
                    amplitude: 1.0,
                    rate: 1.0,
                };
                functions.h = std::array::from_fn(|j| crate::model::presets::switching_growth(&base, j));
                let initial = InitialData {
                    lambda: [0.25, 1.5],
                    f_plus: [Profile::Constant(0.0), Profile::Constant(0.0)],
                    f_minus: [Profile::Constant(0.0), Profile::Constant(0.0)],
                    ..initial
                };
                debug_assert!(functions.h.iter().all(|h| !matches!(h, GrowthLaw::Zero)));
                Study {
                    initial,
                    functions,
                    params: DimensionlessParams {
                        kappa_gamma: 1.0,
                        ..base
                    },
                    stepper: StepperConfig {
                        tau: 0.02,
                        t_end: 2.0,
                        stationarity_tol: 0.0,
                        sample_stride: 1,
                        ..Default::default()
                    },
                    plan: RefinementPlan {
                        axis: RefinementAxis::Time,
                        base_cells: 8,
                        base_tau: 0.02,
                        levels,
                        ratio: 2,
                    },
                    quantity: "lambda1",
                    expected_order: 1.0,
                }
            }
        }
    }
}

fn plan_cells(base: usize, levels: usize) -> usize {
    base * 2usize.pow(levels.saturating_sub(1) as u32)
}

/// Midpoint cell averages of `f` on `n` cells, each from 8 sub-samples.
fn cell_averages(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            (0..8)
                .map(|i| f((k as f64 + (i as f64 + 0.5) / 8.0) / n as f64))
                .sum::<f64>()
                / 8.0
        })
        .collect()
}

impl Study {
    pub fn run(&self) -> Result<ConvergenceReport> {
        let records = run_refinement(
            &self.initial,
            &self.functions,
            &self.params,
            &self.stepper,
            &self.plan,
        )?;
        self_convergence(&records)
    }
}
