use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use neurite_growth::experiment::{
    load_config, output_root, run_convergence, run_stationary, run_sweep,
    OUTPUT_ROOT_ENV,
};
use neurite_growth::validation::{hypothesis_diagnostics, ConvergenceReport, RefinementAxis, StudyCase};
use neurite_growth::{Error, Result};

#[derive(Parser)]
#[command(name = "neurite-sim", version, about = "Neurite growth simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more configs and write their artifacts.
    #[command(after_help = format!("Outputs go to ${OUTPUT_ROOT_ENV}/<name> (default ./output/<name>)."))]
    Simulate {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Run the configs concurrently, one directory each.
        #[arg(long)]
        sweep: bool,
        /// Worker threads for --sweep (default: available cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Build the constant stationary state of the [stationary] table.
    Stationary { config: PathBuf },
    /// Hypothesis diagnostics of a config's coupling functions.
    Validate {
        config: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Self-convergence study over nested refinements.
    Converge {
        /// Config whose grid and step form the coarsest level.
        #[arg(required_unless_present = "study")]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = Axis::Both)]
        axis: Axis,
        /// Built-in smooth study instead of a config.
        #[arg(long, value_enum, conflicts_with = "config")]
        study: Option<Study>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Space,
    Time,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Study {
    PureDiffusion,
    PureTransport,
    PoolOde,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    let root = output_root();
    match cmd {
        Command::Simulate {
            configs,
            sweep,
            threads,
        } => {
            let cfgs = configs.iter().map(|p| load_config(p)).collect::<Result<Vec<_>>>()?;
            let threads = if sweep {
                threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            } else {
                1
            };
            let mut failed = 0;
            for (cfg, outcome) in cfgs.iter().zip(run_sweep(&cfgs, &root, threads)?) {
                match outcome {
                    Ok(o) => {
                        let s = &o.record.final_state;
                        println!(
                            "{}: {:?} after {} steps, t = {}, L = ({}, {}) -> {}",
                            cfg.name,
                            o.record.termination,
                            o.record.total_steps,
                            s.time,
                            s.lengths[0],
                            s.lengths[1],
                            o.dir.display()
                        );
                    }
                    Err(e) => {
                        failed += 1;
                        eprintln!("{}: {e}", cfg.name);
                    }
                }
            }
            if failed > 0 {
                eprintln!("{failed} of {} run(s) failed", cfgs.len());
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stationary { config } => {
            let cfg = load_config(&config)?;
            let spec = cfg.stationary.ok_or_else(|| Error::Config {
                path: config.display().to_string(),
                message: "missing [stationary] table".into(),
            })?;
            print!("{}", run_stationary(&spec)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config, json } => {
            let cfg = load_config(&config)?;
            let report = hypothesis_diagnostics(&cfg.functions, &cfg.params);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for c in &report.checks {
                    match &c.worst {
                        None => println!("{:<3} pass ({} samples)", c.id, c.samples),
                        Some(w) => println!(
                            "{:<3} warn: {} fails at {:?}{} (value {}, off by {:.3e})",
                            c.id,
                            w.property,
                            w.args,
                            w.neurite.map(|j| format!(" on neurite {}", j + 1)).unwrap_or_default(),
                            w.value,
                            w.violation
                        ),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge {
            config,
            levels,
            axis,
            study,
        } => {
            let (name, report) = match (study, config) {
                (Some(s), _) => {
                    let case = match s {
                        Study::PureDiffusion => StudyCase::PureDiffusion,
                        Study::PureTransport => StudyCase::PureTransport,
                        Study::PoolOde => StudyCase::PoolOde,
                    };
                    (case.name().to_string(), case.study(levels).run()?)
                }
                (None, Some(path)) => {
                    let cfg = load_config(&path)?;
                    let axis = match axis {
                        Axis::Space => RefinementAxis::Space,
                        Axis::Time => RefinementAxis::Time,
                        Axis::Both => RefinementAxis::Both,
                    };
                    (cfg.name.clone(), run_convergence(&cfg, levels, axis)?)
                }
                (None, None) => unreachable!("clap requires a config or a study"),
            };
            print_convergence(&report);
            let dir = root.join(&name);
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("converge.json"), serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_convergence(r: &ConvergenceReport) {
    println!("refinement {:?}, ratio {}", r.axis, r.ratio);
    for l in &r.levels {
        println!("  level: {} cells, tau = {}", l.n_cells, l.tau);
    }
    for q in &r.quantities {
        let order = q.order.map_or("n/a".to_string(), |p| format!("{p:.3}"));
        let diffs: Vec<String> = q.differences.iter().map(|d| format!("{d:.3e}")).collect();
        println!("  {:<10} order {:>6}   differences [{}]", q.name, order, diffs.join(", "));
    }
}
