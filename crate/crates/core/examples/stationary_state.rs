//! Constant stationary states for a few density levels, checked against
//! the discrete right-hand side and by a short run.

use neurite_growth::experiment::{default_stationary_growth, run_stationary, StationarySpec};
use neurite_growth::stationary::PoolCaps;

fn main() -> neurite_growth::Result<()> {
    for f in [0.1, 0.25, 0.4, 0.5] {
        let spec = StationarySpec {
            f_inf: [f, f],
            lambda_inf: [40.0, 60.0],
            lambda_som_inf: 50.0,
            caps: PoolCaps { soma: 100.0, cone: 100.0 },
            v0: 1.0,
            growth: default_stationary_growth(),
            scaled: Default::default(),
            probe_steps: 1000,
            probe_tau: 1e-4,
        };
        println!("--- f_inf = {f}");
        print!("{}", run_stationary(&spec)?);
    }
    Ok(())
}
