//! Watches the box constraints at every step of experiment 2, not only at
//! the sampled times.

use neurite_growth::experiment::ExperimentConfig;
use neurite_growth::integrator::{run, StepperConfig};
use neurite_growth::model::presets::Preset;
use neurite_growth::validation::{BoxMonitor, BOX_TOL};

fn main() -> neurite_growth::Result<()> {
    let cfg = ExperimentConfig::from_preset(Preset::ExperimentTwo);
    let stepper = StepperConfig { t_end: 20.0, ..cfg.stepper_config() };
    let mut monitor = BoxMonitor::new(cfg.params.rho_cap, BOX_TOL);
    run(&cfg.initial_state(), &stepper, &cfg.functions, &cfg.params, &mut [&mut monitor])?;
    let r = monitor.report();
    println!("min density {:.3e}, max rho {:.6} (cap {})", r.min_density, r.max_rho, r.rho_cap);
    match r.first_violation {
        None => println!("box constraints hold"),
        Some(t) => println!("first violation at t = {t}"),
    }
    Ok(())
}
