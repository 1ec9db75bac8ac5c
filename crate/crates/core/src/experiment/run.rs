use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use super::config::{ExperimentConfig, StationarySpec};
use super::output::{write_csv_artifacts, write_file, write_svg_artifacts};
use crate::error::{Error, Result};
use crate::integrator::{run, RunRecord, StepperConfig};
use crate::model::NEURITES;
use crate::stationary::{
    mass_of_state, solve_constant_state, stationary_residual, ConstantStationaryState,
};
use crate::validation::{
    run_refinement, self_convergence, BoxMonitor, ConvergenceReport, RefinementAxis,
    RefinementPlan, ValidationReport, BOX_TOL,
};

/// Environment variable naming the directory that receives run outputs.
pub const OUTPUT_ROOT_ENV: &str = "NEURITE_OUTPUT_ROOT";

/// `$NEURITE_OUTPUT_ROOT`, or `./output` when unset.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("output"))
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub preset: Option<String>,
    pub n_cells: usize,
    pub tau: f64,
    pub t_end: f64,
    pub snapshots: Vec<String>,
    /// Snapshot times whose profiles left the box by more than the monitor
    /// tolerance.
    pub snapshot_box_violations: Vec<f64>,
    pub validation: ValidationReport,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub record: RunRecord,
    pub report: RunReport,
}

/// Runs `cfg` and writes its artifacts to `root/<output dir>`.
///
/// A failing solve leaves `error.txt` in the directory and returns the error.
pub fn run_experiment(cfg: &ExperimentConfig, root: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let dir = root.join(cfg.output_dir());
    std::fs::create_dir_all(&dir)?;
    let stepper = cfg.stepper_config();
    let mut monitor = BoxMonitor::new(cfg.params.rho_cap, BOX_TOL);
    let record = match run(
        &cfg.initial_state(),
        &stepper,
        &cfg.functions,
        &cfg.params,
        &mut [&mut monitor],
    ) {
        Ok(r) => r,
        Err(e) => {
            write_file(&dir.join("error.txt"), &format!("{e}\n"))?;
            return Err(e);
        }
    };
    let files = write_csv_artifacts(&dir, &record)?;
    if cfg.output.svg {
        write_svg_artifacts(&dir, &record)?;
    }
    let snapshot_box_violations = record
        .snapshots
        .iter()
        .filter(|s| {
            s.fields
                .iter()
                .any(|f| f.min_density() < -BOX_TOL || f.max_rho() > cfg.params.rho_cap + BOX_TOL)
        })
        .map(|s| s.time)
        .collect();
    let mut validation = ValidationReport::from_run(&record, &cfg.functions, &cfg.params);
    // The observer saw every step, so its first violation time is exact.
    validation.box_constraints = monitor.report();
    let report = RunReport {
        name: cfg.name.clone(),
        preset: cfg.preset.clone(),
        n_cells: cfg.n_cells,
        tau: stepper.tau,
        t_end: stepper.t_end,
        snapshots: files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        snapshot_box_violations,
        validation,
    };
    write_file(&dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    Ok(RunOutcome {
        dir,
        record,
        report,
    })
}

/// Runs every config on a pool of `threads` workers. Results keep the input
/// order. Configs must write to distinct directories.
pub fn run_sweep(
    configs: &[ExperimentConfig],
    root: &Path,
    threads: usize,
) -> Result<Vec<Result<RunOutcome>>> {
    let mut seen = HashSet::new();
    for c in configs {
        if !seen.insert(c.output_dir()) {
            return Err(Error::Config {
                path: c
                    .source
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| c.name.clone()),
                message: format!("output directory `{}` is used by another config of the sweep", c.output_dir()),
            });
        }
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunOutcome>>>> =
        configs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, configs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let outcome = run_experiment(cfg, root);
                *slots[i].lock().expect("result slot") = Some(outcome);
            });
        }
    });
    Ok(slots
        .into_iter()
        .map(|m| m.into_inner().expect("result slot").expect("every config ran"))
        .collect())
}

/// Result of the `stationary` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct StationaryOutcome {
    pub state: ConstantStationaryState,
    /// Per neurite: cone and soma compatibility errors.
    pub compatibility: [(f64, f64); NEURITES],
    pub through_flux: [f64; NEURITES],
    pub residual: f64,
    pub mass: f64,
    /// Largest per-entry drift of a probe run, when one was requested.
    pub probe_drift: Option<f64>,
}

pub fn run_stationary(spec: &StationarySpec) -> Result<StationaryOutcome> {
    let state = solve_constant_state(spec.f_inf, spec.lambda_inf, spec.lambda_som_inf, spec.caps, spec.v0)?
        .settle_lengths(&spec.growth, spec.scaled.ell_min)?;
    let scaled = state.to_scaled(&spec.growth, &spec.scaled);
    let residual = stationary_residual(&scaled.state, &scaled.functions, &scaled.params)?;
    let probe_drift = if spec.probe_steps > 0 {
        let cfg = StepperConfig {
            tau: spec.probe_tau,
            t_end: spec.probe_tau * spec.probe_steps as f64,
            stationarity_tol: 0.0,
            sample_stride: spec.probe_steps,
            ..Default::default()
        };
        let rec = run(&scaled.state, &cfg, &scaled.functions, &scaled.params, &mut [])?;
        Some(state_drift(&scaled.state, &rec.final_state))
    } else {
        None
    };
    Ok(StationaryOutcome {
        compatibility: std::array::from_fn(|j| state.compatibility_errors(j)),
        through_flux: std::array::from_fn(|j| state.flux(j)),
        residual,
        mass: mass_of_state(&state),
        probe_drift,
        state,
    })
}

/// Largest absolute difference over every unknown of two states.
pub fn state_drift(a: &crate::model::SimState, b: &crate::model::SimState) -> f64 {
    let mut worst: f64 = (a.lambda_som - b.lambda_som).abs();
    for j in 0..NEURITES {
        worst = worst
            .max((a.lambda[j] - b.lambda[j]).abs())
            .max((a.lengths[j] - b.lengths[j]).abs());
        let pairs = [
            (&a.fields[j].f_plus, &b.fields[j].f_plus),
            (&a.fields[j].f_minus, &b.fields[j].f_minus),
        ];
        for (u, v) in pairs {
            for (x, y) in u.iter().zip(v) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    worst
}

impl fmt::Display for StationaryOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.state;
        writeln!(f, "constant stationary state (unscaled, v0 = {})", s.v0)?;
        writeln!(f, "  Lambda_som = {}", s.lambda_som_inf)?;
        for j in 0..NEURITES {
            let c = &s.coefficients[j];
            writeln!(
                f,
                "  neurite {}: f = {}, Lambda = {}, L = {}",
                j + 1,
                s.f_inf[j],
                s.lambda_inf[j],
                s.lengths[j]
            )?;
            writeln!(
                f,
                "    c_alpha+ = {}, c_alpha- = {}, c_beta+ = {}, c_beta- = {}",
                c.alpha_plus, c.alpha_minus, c.beta_plus, c.beta_minus
            )?;
            let (cone, soma) = self.compatibility[j];
            writeln!(
                f,
                "    through-flux = {}, compatibility error cone {cone:.3e}, soma {soma:.3e}",
                self.through_flux[j]
            )?;
        }
        writeln!(f, "  mass = {}", self.mass)?;
        writeln!(f, "  discrete residual = {:.3e}", self.residual)?;
        if let Some(d) = self.probe_drift {
            writeln!(f, "  probe drift = {d:.3e}")?;
        }
        Ok(())
    }
}

/// Refinement study of a config: its own grid and step are the coarsest
/// level, each further level refines by 2 along `axis`.
pub fn run_convergence(
    cfg: &ExperimentConfig,
    levels: usize,
    axis: RefinementAxis,
) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let stepper = cfg.stepper_config();
    let plan = RefinementPlan {
        axis,
        base_cells: cfg.n_cells,
        base_tau: stepper.tau,
        levels,
        ratio: 2,
    };
    let records = run_refinement(&cfg.initial, &cfg.functions, &cfg.params, &stepper, &plan)?;
    self_convergence(&records)
}
