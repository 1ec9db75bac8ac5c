//! Mass ledger of experiment 1 under joint refinement of h and tau. The
//! balance residual comes from the lagged cone consumption and shrinks
//! linearly.

use neurite_growth::experiment::ExperimentConfig;
use neurite_growth::integrator::{run, StepperConfig};
use neurite_growth::model::presets::Preset;
use neurite_growth::validation::{mass_balance_slope, MassLedger};

fn main() -> neurite_growth::Result<()> {
    let cfg = ExperimentConfig::from_preset(Preset::ExperimentOne);
    let mut levels = Vec::new();
    for i in 0..3 {
        let n = 25usize << i;
        let stepper = StepperConfig {
            tau: 4e-4 / f64::from(1u32 << i),
            t_end: 10.0,
            stationarity_tol: 0.0,
            sample_stride: 100,
            ..Default::default()
        };
        let rec = run(&cfg.initial.to_state(n), &stepper, &cfg.functions, &cfg.params, &mut [])?;
        let ledger = MassLedger::from_record(&rec);
        println!(
            "n = {n:>3}  tau = {:.1e}  max residual {:.4e}  relative {:.4e}",
            stepper.tau,
            ledger.max_residual(),
            ledger.max_relative_residual()
        );
        levels.push((1.0 / n as f64, rec));
    }
    let pairs: Vec<_> = levels.iter().map(|(h, r)| (*h, r)).collect();
    println!("slope {:.3}", mass_balance_slope(&pairs)?);
    Ok(())
}
