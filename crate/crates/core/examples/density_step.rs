//! One implicit-explicit density step by hand: the explicit residual, then
//! the diffusion solve, compared with the stepper's own update.

use neurite_growth::experiment::ExperimentConfig;
use neurite_growth::fv::{assemble_diffusion, explicit_residual, Grid1D};
use neurite_growth::integrator::Stepper;
use neurite_growth::model::presets::Preset;

fn main() -> neurite_growth::Result<()> {
    let cfg = ExperimentConfig::from_preset(Preset::ExperimentOne);
    let (mf, p) = (&cfg.functions, &cfg.params);
    let state = cfg.initial_state();
    let stepper_cfg = cfg.stepper_config();
    let tau = stepper_cfg.tau;
    let grid = Grid1D::new(cfg.n_cells)?;
    let a = assemble_diffusion(&grid)?;

    let j = 0;
    let (field, length) = (&state.fields[j], state.lengths[j]);
    let res = explicit_residual(field, length, state.length_rates[j], state.lambda_som, state.lambda[j], mf, j, p, &grid);
    let mut rhs: Vec<f64> = field.f_plus.iter().zip(&res.plus).map(|(f, r)| f + tau * r).collect();
    let mut scratch = vec![0.0; grid.n_cells()];
    a.solve_shifted(tau * p.kappa_d / (length * length * grid.h()), &mut rhs, &mut scratch);

    let mut stepper = Stepper::new(&stepper_cfg, mf, p, cfg.n_cells)?;
    let next = stepper.step_densities(&state);
    let diff = rhs.iter().zip(&next[j].f_plus).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("f+ at the soma end: {:.12} -> {:.12}", field.f_plus[0], rhs[0]);
    println!("f+ at the cone end: {:.12} -> {:.12}", field.f_plus[grid.n_cells() - 1], rhs[grid.n_cells() - 1]);
    println!("largest difference to the stepper: {diff:.3e}");
    Ok(())
}
