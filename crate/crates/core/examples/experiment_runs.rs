//! Runs one of the built-in experiments and prints the lengths and cone
//! levels every few time units.
//!
//!     cargo run --release --example experiment_runs -- experiment-2 200

use neurite_growth::experiment::ExperimentConfig;
use neurite_growth::integrator::{run, StepperConfig};
use neurite_growth::model::presets::Preset;

fn main() -> neurite_growth::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "experiment-1".into());
    let t_end: f64 = args.next().map_or(50.0, |s| s.parse().expect("t_end must be a number"));
    let preset = Preset::from_name(&name).unwrap_or_else(|| panic!("unknown preset {name}"));

    let cfg = ExperimentConfig::from_preset(preset);
    let stepper = StepperConfig {
        t_end,
        sample_stride: 10_000,
        ..cfg.stepper_config()
    };
    let record = run(&cfg.initial_state(), &stepper, &cfg.functions, &cfg.params, &mut [])?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "t", "L1", "L2", "Lambda1", "Lambda2");
    for i in 0..record.len() {
        println!(
            "{:>8.1} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            record.times[i], record.lengths[0][i], record.lengths[1][i], record.lambda[0][i], record.lambda[1][i]
        );
    }
    println!("stopped: {:?} after {} steps", record.termination, record.total_steps);
    Ok(())
}
