//! Experiment 1 with the small and the large somatic emission rate side by
//! side. The large rate keeps the initially longer neurite ahead.

use neurite_growth::experiment::ExperimentConfig;
use neurite_growth::integrator::{run, StepperConfig};
use neurite_growth::model::presets::Preset;
use neurite_growth::model::{RateLaw, NEURITES};

fn main() -> neurite_growth::Result<()> {
    let t_end: f64 = std::env::args().nth(1).map_or(100.0, |s| s.parse().expect("t_end"));
    let small = ExperimentConfig::from_preset(Preset::ExperimentOne);
    let mut large = small.clone();
    let cap = large.params.lambda_som_cap;
    large.functions.alpha_plus = [RateLaw::Rising { coef: 1.0, cap }; NEURITES];

    for (label, cfg) in [("alpha+ = 0.05 Lambda/2", &small), ("alpha+ = Lambda/2", &large)] {
        let stepper = StepperConfig { t_end, ..cfg.stepper_config() };
        let r = run(&cfg.initial_state(), &stepper, &cfg.functions, &cfg.params, &mut [])?;
        let [l1, l2] = r.final_state.lengths;
        println!("{label:<24} t = {:>7.1}  L1 = {l1:.5}  L2 = {l2:.5}", r.final_state.time);
    }
    Ok(())
}
