//! Builds a small sweep over the growth cost from TOML text and runs it on
//! all cores. Artifacts land under $NEURITE_OUTPUT_ROOT (default ./output).

use neurite_growth::experiment::{output_root, parse_config, run_sweep};

fn main() -> neurite_growth::Result<()> {
    let mut configs = Vec::new();
    for c in [1.0, 5.0, 20.0, 58.4] {
        let text = format!(
            r#"
name = "sweep-c{c}"
preset = "experiment-1"

[params]
c_growth = [{c}, {c}]

[stepper]
t_end = 20.0

[output]
sample_stride = 1000
svg = false
"#
        );
        configs.push(parse_config(&text, "config_sweep")?);
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let root = output_root();
    for (cfg, out) in configs.iter().zip(run_sweep(&configs, &root, threads)?) {
        let out = out?;
        let [l1, l2] = out.record.final_state.lengths;
        println!("{:<14} L1 = {l1:.5}  L2 = {l2:.5}  -> {}", cfg.name, out.dir.display());
    }
    Ok(())
}
