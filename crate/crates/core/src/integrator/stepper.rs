use serde::{Deserialize, Serialize};

use super::record::{Observer, RunExtremes, RunRecord, Snapshot, Termination};
use super::scalar::{solve_backward_euler, NewtonSettings};
use crate::error::{invalid, Error, Result};
use crate::fv::{
    assemble_diffusion, convective_residual_into, reaction_geometric_residual_into, Grid1D,
    Residual, TridiagonalOperator,
};
use crate::model::{
    boundary_fluxes, length_rhs, BoundaryFluxes, DimensionlessParams, ModelFunctions,
    NeuriteField, SimState, NEURITES,
};
use crate::validation::total_mass;

/// Time stepping and sampling controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepperConfig {
    pub tau: f64,
    pub t_end: f64,
    /// Stop once every density vector changes by at most this much (2-norm)
    /// over one step. Zero disables the check.
    pub stationarity_tol: f64,
    /// Optional cap on the number of steps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Record series every `sample_stride` steps.
    pub sample_stride: u64,
    pub snapshot_times: Vec<f64>,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            tau: 1e-4,
            t_end: 1000.0,
            stationarity_tol: 1e-9,
            max_steps: None,
            newton_tol: 1e-12,
            newton_max_iter: 50,
            sample_stride: 1000,
            snapshot_times: Vec::new(),
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", format!("must be > 0, got {}", self.tau)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", format!("must be >= 0, got {}", self.t_end)));
        }
        if !(self.stationarity_tol >= 0.0) {
            return Err(invalid("stationarity_tol", "must be >= 0"));
        }
        if self.sample_stride == 0 {
            return Err(invalid("sample_stride", "must be >= 1"));
        }
        if !(self.newton_tol > 0.0) || self.newton_max_iter == 0 {
            return Err(invalid("newton_tol", "tolerance and iteration cap must be positive"));
        }
        Ok(())
    }

    /// Number of steps needed to reach `t_end`.
    pub fn n_steps(&self) -> u64 {
        let raw = self.t_end / self.tau;
        let rounded = raw.round();
        if (raw - rounded).abs() < 1e-9 * raw.max(1.0) {
            rounded as u64
        } else {
            raw.ceil() as u64
        }
    }

    fn newton(&self) -> NewtonSettings {
        NewtonSettings {
            tol: self.newton_tol,
            max_iter: self.newton_max_iter,
        }
    }
}

/// Implicit–explicit stepper for one model instance.
///
/// One step computes, in order, the densities (diffusion implicit, transport
/// and reactions explicit), the pools (backward Euler with the new boundary
/// traces) and the lengths (backward Euler).
pub struct Stepper<'a> {
    cfg: &'a StepperConfig,
    mf: &'a ModelFunctions,
    p: &'a DimensionlessParams,
    grid: Grid1D,
    diffusion: TridiagonalOperator,
    conv: Residual,
    reac: Residual,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        cfg: &'a StepperConfig,
        mf: &'a ModelFunctions,
        p: &'a DimensionlessParams,
        n_cells: usize,
    ) -> Result<Self> {
        let grid = Grid1D::new(n_cells)?;
        let diffusion = assemble_diffusion(&grid)?;
        Ok(Stepper {
            cfg,
            mf,
            p,
            grid,
            diffusion,
            conv: Residual::zeros(n_cells),
            reac: Residual::zeros(n_cells),
            scratch: vec![0.0; n_cells],
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Density update of both neurites, written into `out`.
    pub fn step_densities_into(&mut self, state: &SimState, out: &mut [NeuriteField; NEURITES]) {
        let tau = self.cfg.tau;
        for j in 0..NEURITES {
            let field = &state.fields[j];
            let length = state.lengths[j];
            let dldt = state.length_rates[j];
            let bc = boundary_fluxes(field, state.lambda_som, state.lambda[j], self.mf, j);
            convective_residual_into(field, length, dldt, &bc, self.p, &self.grid, &mut self.conv);
            reaction_geometric_residual_into(field, length, dldt, self.p, &mut self.reac);

            let scale = tau * self.p.kappa_d / (length * length * self.grid.h());
            let target = &mut out[j];
            for k in 0..field.n_cells() {
                target.f_plus[k] = field.f_plus[k] + tau * (self.conv.plus[k] + self.reac.plus[k]);
                target.f_minus[k] =
                    field.f_minus[k] + tau * (self.conv.minus[k] + self.reac.minus[k]);
            }
            if scale > 0.0 {
                self.diffusion
                    .solve_shifted(scale, &mut target.f_plus, &mut self.scratch);
                self.diffusion
                    .solve_shifted(scale, &mut target.f_minus, &mut self.scratch);
            }
        }
    }

    pub fn step_densities(&mut self, state: &SimState) -> [NeuriteField; NEURITES] {
        let n = state.n_cells();
        let mut out = [NeuriteField::zeros(n), NeuriteField::zeros(n)];
        self.step_densities_into(state, &mut out);
        out
    }

    /// Pool update given the already advanced densities.
    ///
    /// The cone consumption term is evaluated at the old pool level and
    /// length; exchange terms are implicit in the new pool level.
    pub fn step_pools(
        &self,
        state: &SimState,
        new_fields: &[NeuriteField; NEURITES],
    ) -> Result<(f64, [f64; NEURITES])> {
        let tau = self.cfg.tau;
        let mf = self.mf;
        let p = self.p;
        let t = state.time;

        let soma_traces: [(f64, f64); NEURITES] = std::array::from_fn(|j| new_fields[j].soma_trace());
        let production = p.kappa_gamma * mf.gamma.eval(t);
        let soma_rate = |s: f64| {
            let mut r = production;
            let mut dr = 0.0;
            for j in 0..NEURITES {
                let (fp, fm) = soma_traces[j];
                let g = mf.g_plus[j].eval(fp, fm);
                r += p.kappa_som * (mf.beta_minus[j].eval(s) * fm - mf.alpha_plus[j].eval(s) * g);
                dr += p.kappa_som
                    * (mf.beta_minus[j].derivative(s) * fm - mf.alpha_plus[j].derivative(s) * g);
            }
            (r, dr)
        };
        let soma_affine = (0..NEURITES)
            .all(|j| mf.beta_minus[j].affine().is_some() && mf.alpha_plus[j].affine().is_some());
        let lambda_som = if soma_affine {
            solve_affine(state.lambda_som, tau, soma_rate)
        } else {
            solve_backward_euler(
                state.lambda_som,
                tau,
                state.lambda_som,
                soma_rate,
                self.cfg.newton(),
                "soma pool",
            )?
        };

        let mut lambda = [0.0; NEURITES];
        for j in 0..NEURITES {
            let (fp, fm) = new_fields[j].tip_trace();
            let g = mf.g_minus[j].eval(fp, fm);
            let consumption = p.kappa_h(j) * mf.h[j].eval(state.lambda[j], state.lengths[j]);
            let cone_rate = |s: f64| {
                let r = p.kappa_cone * (mf.beta_plus[j].eval(s) * fp - mf.alpha_minus[j].eval(s) * g)
                    - consumption;
                let dr = p.kappa_cone
                    * (mf.beta_plus[j].derivative(s) * fp - mf.alpha_minus[j].derivative(s) * g);
                (r, dr)
            };
            let affine = mf.beta_plus[j].affine().is_some() && mf.alpha_minus[j].affine().is_some();
            lambda[j] = if affine {
                solve_affine(state.lambda[j], tau, cone_rate)
            } else {
                solve_backward_euler(
                    state.lambda[j],
                    tau,
                    state.lambda[j],
                    cone_rate,
                    self.cfg.newton(),
                    "cone pool",
                )?
            };
        }
        Ok((lambda_som, lambda))
    }

    /// Length update given the new cone levels. Returns the new lengths and
    /// the difference quotients used as growth rates by the next step.
    pub fn step_length(
        &self,
        state: &SimState,
        new_lambda: [f64; NEURITES],
    ) -> Result<([f64; NEURITES], [f64; NEURITES])> {
        let tau = self.cfg.tau;
        let mut lengths = state.lengths;
        let mut rates = [0.0; NEURITES];
        for j in 0..NEURITES {
            let law = &self.mf.h[j];
            let old = state.lengths[j];
            let new = match *law {
                crate::model::GrowthLaw::Zero => old,
                crate::model::GrowthLaw::Constant { value } => old + tau * self.p.kappa_l * value,
                _ => {
                    let lam = new_lambda[j];
                    let kl = self.p.kappa_l;
                    solve_backward_euler(
                        old,
                        tau,
                        old,
                        |len| (kl * law.eval(lam, len), kl * law.d_length(lam, len)),
                        self.cfg.newton(),
                        "length",
                    )?
                }
            };
            lengths[j] = new;
            rates[j] = (new - old) / tau;
        }
        Ok((lengths, rates))
    }

    /// Advances `state` by one step in place, reusing `buffer` for the new
    /// densities. Returns the largest 2-norm change among the density vectors.
    pub fn advance(
        &mut self,
        state: &mut SimState,
        buffer: &mut [NeuriteField; NEURITES],
        step: u64,
        t0: f64,
    ) -> Result<f64> {
        self.step_densities_into(state, buffer);
        let (lambda_som, lambda) = self.step_pools(state, buffer)?;
        let (lengths, rates) = self.step_length(state, lambda)?;

        let mut change: f64 = 0.0;
        for j in 0..NEURITES {
            change = change
                .max(l2_diff(&state.fields[j].f_plus, &buffer[j].f_plus))
                .max(l2_diff(&state.fields[j].f_minus, &buffer[j].f_minus));
        }
        std::mem::swap(&mut state.fields, buffer);
        state.lambda_som = lambda_som;
        state.lambda = lambda;
        state.lengths = lengths;
        state.length_rates = rates;
        state.time = t0 + step as f64 * self.cfg.tau;
        Ok(change)
    }
}

/// Closed-form backward Euler step for a rate affine in the unknown.
fn solve_affine(base: f64, tau: f64, rate: impl Fn(f64) -> (f64, f64)) -> f64 {
    let (r0, slope) = rate(0.0);
    (base + tau * r0) / (1.0 - tau * slope)
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Growth rates used by the first density step: `kappa_L * h` at the data.
pub fn initial_length_rates(
    state: &SimState,
    mf: &ModelFunctions,
    p: &DimensionlessParams,
) -> [f64; NEURITES] {
    std::array::from_fn(|j| length_rhs(state.lambda[j], state.lengths[j], &mf.h[j], p))
}

/// Integrates from `initial` until `t_end`, stationarity or the step cap.
pub fn run(
    initial: &SimState,
    cfg: &StepperConfig,
    mf: &ModelFunctions,
    p: &DimensionlessParams,
    observers: &mut [&mut dyn Observer],
) -> Result<RunRecord> {
    cfg.validate()?;
    p.validate()?;
    let n_cells = initial.n_cells();
    let mut stepper = Stepper::new(cfg, mf, p, n_cells)?;
    let grid = stepper.grid().clone();

    let mut state = initial.clone();
    state.length_rates = initial_length_rates(&state, mf, p);
    let t0 = state.time;
    let m0 = total_mass(&state, &grid, p);
    let produced = |t: f64| p.mass_units.soma * p.kappa_gamma * mf.gamma.integral(t - t0);

    let n_steps = cfg.n_steps();
    let mut rec = Recorder::new(cfg, &state, p.rho_cap);
    rec.sample(0, &state, m0, m0);
    rec.maybe_snapshot(0, &state);
    for obs in observers.iter_mut() {
        obs.observe(0, &state);
    }

    let mut buffer = [NeuriteField::zeros(n_cells), NeuriteField::zeros(n_cells)];
    let mut termination = Termination::ReachedTEnd;
    let mut step = 0u64;
    while step < n_steps {
        if cfg.max_steps.is_some_and(|m| step >= m) {
            termination = Termination::MaxSteps;
            break;
        }
        step += 1;
        let change = stepper
            .advance(&mut state, &mut buffer, step, t0)
            .map_err(|e| Error::StepFailed {
                step,
                time: t0 + step as f64 * cfg.tau,
                source: Box::new(e),
            })?;
        rec.extremes.update(&state);
        rec.check_fluxes(&state, mf);
        for obs in observers.iter_mut() {
            obs.observe(step, &state);
        }
        let stationary = cfg.stationarity_tol > 0.0 && change <= cfg.stationarity_tol;
        let last = stationary || step == n_steps;
        if step.is_multiple_of(cfg.sample_stride) || last {
            let m = total_mass(&state, &grid, p);
            rec.sample(step, &state, m, m0 + produced(state.time));
        }
        rec.maybe_snapshot(step, &state);
        if stationary {
            termination = Termination::Stationary;
            break;
        }
    }
    if termination == Termination::MaxSteps && rec.steps.last() != Some(&step) {
        let m = total_mass(&state, &grid, p);
        rec.sample(step, &state, m, m0 + produced(state.time));
    }
    Ok(rec.finish(state, step, termination, cfg.tau))
}

struct Recorder {
    stride_times: Vec<f64>,
    next_snapshot: usize,
    steps: Vec<u64>,
    times: Vec<f64>,
    lengths: [Vec<f64>; NEURITES],
    lambda_som: Vec<f64>,
    lambda: [Vec<f64>; NEURITES],
    mass: Vec<f64>,
    mass_residual: Vec<f64>,
    min_density: Vec<f64>,
    max_rho: Vec<f64>,
    snapshots: Vec<Snapshot>,
    extremes: RunExtremes,
    rho_cap: f64,
    tau: f64,
    diagnostics: Vec<String>,
    flux_warned: bool,
}

impl Recorder {
    fn new(cfg: &StepperConfig, state: &SimState, rho_cap: f64) -> Self {
        let mut stride_times = cfg.snapshot_times.clone();
        stride_times.sort_by(f64::total_cmp);
        Recorder {
            stride_times,
            next_snapshot: 0,
            steps: Vec::new(),
            times: Vec::new(),
            lengths: [Vec::new(), Vec::new()],
            lambda_som: Vec::new(),
            lambda: [Vec::new(), Vec::new()],
            mass: Vec::new(),
            mass_residual: Vec::new(),
            min_density: Vec::new(),
            max_rho: Vec::new(),
            snapshots: Vec::new(),
            extremes: RunExtremes::start(state),
            rho_cap,
            tau: cfg.tau,
            diagnostics: Vec::new(),
            flux_warned: false,
        }
    }

    fn sample(&mut self, step: u64, state: &SimState, mass: f64, expected: f64) {
        self.steps.push(step);
        self.times.push(state.time);
        for j in 0..NEURITES {
            self.lengths[j].push(state.lengths[j]);
            self.lambda[j].push(state.lambda[j]);
        }
        self.lambda_som.push(state.lambda_som);
        self.mass.push(mass);
        self.mass_residual.push((mass - expected).abs());
        self.min_density.push(state.min_density());
        self.max_rho.push(state.max_rho());
    }

    fn maybe_snapshot(&mut self, step: u64, state: &SimState) {
        while self.next_snapshot < self.stride_times.len()
            && state.time >= self.stride_times[self.next_snapshot] - 0.5 * self.tau
        {
            if self.snapshots.last().map(|s| s.step) != Some(step) {
                self.snapshots.push(Snapshot::of(step, state));
            }
            self.next_snapshot += 1;
        }
    }

    fn check_fluxes(&mut self, state: &SimState, mf: &ModelFunctions) {
        if self.flux_warned {
            return;
        }
        for j in 0..NEURITES {
            let b: BoundaryFluxes =
                boundary_fluxes(&state.fields[j], state.lambda_som, state.lambda[j], mf, j);
            let neg = b.negative_entries();
            if !neg.is_empty() {
                self.diagnostics.push(format!(
                    "t = {}: negative boundary flux on neurite {} ({})",
                    state.time,
                    j + 1,
                    neg.join(", ")
                ));
                self.flux_warned = true;
            }
        }
    }

    fn finish(mut self, state: SimState, step: u64, termination: Termination, tau: f64) -> RunRecord {
        if self.snapshots.last().map(|s| s.step) != Some(step) {
            self.snapshots.push(Snapshot::of(step, &state));
        }
        RunRecord {
            times: self.times,
            steps: self.steps,
            lengths: self.lengths,
            lambda_som: self.lambda_som,
            lambda: self.lambda,
            mass: self.mass,
            mass_residual: self.mass_residual,
            min_density: self.min_density,
            max_rho: self.max_rho,
            snapshots: self.snapshots,
            extremes: self.extremes,
            termination,
            final_state: state,
            total_steps: step,
            tau,
            rho_cap: self.rho_cap,
            diagnostics: self.diagnostics,
        }
    }
}
