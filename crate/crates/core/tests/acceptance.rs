//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The three long runs (experiment 1 with small and large alpha,
//! experiment 2) use the full resolution of 101 cells and `tau = 1e-4` and
//! run on their own threads while the cheaper criteria are evaluated.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::thread;
use std::time::{Duration, Instant};

use neurite_growth::experiment::{run_stationary, ExperimentConfig, StationarySpec};
use neurite_growth::integrator::{run, RunRecord, StepperConfig, Termination};
use neurite_growth::model::presets::Preset;
use neurite_growth::model::{ModelFunctions, RateLaw, SimState, NEURITES};
use neurite_growth::scaling::{max_density, PhysicalScales};
use neurite_growth::stationary::{PoolCaps, ScaledOptions};
use neurite_growth::validation::{
    first_oscillation, mass_balance_slope, BoxMonitor, MassLedger, StudyCase, BOX_TOL,
};

const MIN_LENGTH_TOL: f64 = 1e-12;
const RUNTIME_LIMIT: Duration = Duration::from_secs(600);
const CLOSED_STEPS: u64 = 100_000;
const CLOSED_REL_TOL: f64 = 1e-12;
const MASS_SLOPE_MIN: f64 = 0.8;
const PROMINENCE: f64 = 1e-3;
const T_FINAL: f64 = 1000.0;
const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;
const STATIONARY_DRIFT_TOL: f64 = 1e-8;
const STATIONARY_PROBE_STEPS: u64 = 10_000;
const ORDER_TOL: f64 = 0.3;
const CONVERGENCE_LEVELS: usize = 4;

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(id: &'static str, pass: bool, detail: String) -> Self {
        Verdict { id, pass, detail }
    }
}

/// A full-resolution run with a box monitor and an optional per-step probe
/// of `L1 - L2`.
struct LongRun {
    record: RunRecord,
    box_ok: bool,
    box_detail: String,
    min_gap: f64,
    ell_min: [f64; NEURITES],
    elapsed: Duration,
}

fn long_run(cfg: ExperimentConfig) -> LongRun {
    let start = Instant::now();
    let stepper = StepperConfig {
        stationarity_tol: 1e-9,
        t_end: T_FINAL,
        ..cfg.stepper_config()
    };
    let mut monitor = BoxMonitor::new(cfg.params.rho_cap, BOX_TOL);
    let mut min_gap = f64::INFINITY;
    let mut gap = |_: u64, s: &SimState| min_gap = min_gap.min(s.lengths[0] - s.lengths[1]);
    let initial = cfg.initial_state();
    let record = run(&initial, &stepper, &cfg.functions, &cfg.params, &mut [&mut monitor, &mut gap])
        .unwrap_or_else(|e| panic!("{}: {e}", cfg.name));
    let report = monitor.report();
    LongRun {
        box_ok: report.holds(),
        box_detail: format!(
            "min f = {:.3e}, max rho = {:.12} (cap {})",
            report.min_density, report.max_rho, report.rho_cap
        ),
        record,
        min_gap,
        ell_min: cfg.params.ell_min,
        elapsed: start.elapsed(),
    }
}

fn large_alpha() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_preset(Preset::ExperimentOne);
    cfg.name = "experiment-1-large-alpha".into();
    let cap = cfg.params.lambda_som_cap;
    cfg.functions.alpha_plus = [RateLaw::Rising { coef: 1.0, cap }; NEURITES];
    cfg
}

fn final_lengths(r: &RunRecord) -> [f64; NEURITES] {
    r.final_state.lengths
}

fn criterion_1(runs: &[(&str, &LongRun)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r) in runs {
        let fast = r.elapsed <= RUNTIME_LIMIT;
        pass &= r.box_ok && fast;
        parts.push(format!(
            "{name}: {} {}, {:.0} s",
            if r.box_ok { "box holds," } else { "box VIOLATED," },
            r.box_detail,
            r.elapsed.as_secs_f64()
        ));
    }
    Verdict::new("1 box constraints", pass, format!("{}; tol {BOX_TOL:e}, limit 600 s", parts.join("; ")))
}

fn criterion_2(runs: &[(&str, &LongRun)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r) in runs {
        let m = r.record.extremes.min_length;
        let ok = (0..NEURITES).all(|j| m[j] >= r.ell_min[j] - MIN_LENGTH_TOL);
        pass &= ok;
        parts.push(format!("{name}: min L = ({:.6}, {:.6})", m[0], m[1]));
    }
    Verdict::new("2 minimal length", pass, format!("{}; bound 0.1 - 1e-12", parts.join("; ")))
}

fn criterion_3() -> Verdict {
    // Closed system: no exchange, production or growth, transport active.
    let base = ExperimentConfig::from_preset(Preset::ExperimentOne);
    let closed = ModelFunctions::closed();
    let stepper = StepperConfig {
        tau: 1e-4,
        t_end: CLOSED_STEPS as f64 * 1e-4,
        stationarity_tol: 0.0,
        sample_stride: 100,
        ..Default::default()
    };
    let rec = run(&base.initial_state(), &stepper, &closed, &base.params, &mut []).expect("closed run");
    let rel = MassLedger::from_record(&rec).max_relative_residual();
    let closed_ok = rel <= CLOSED_REL_TOL && rec.total_steps == CLOSED_STEPS;

    // Balance residual of the full experiment under (h, tau) halvings.
    let levels: Vec<(f64, RunRecord)> = thread::scope(|s| {
        let handles: Vec<_> = (0..3)
            .map(|i| {
                let base = &base;
                s.spawn(move || {
                    let n = 25usize << i;
                    let tau = 4e-4 / (1u64 << i) as f64;
                    let stepper = StepperConfig {
                        tau,
                        t_end: 10.0,
                        stationarity_tol: 0.0,
                        sample_stride: 100 << i,
                        ..Default::default()
                    };
                    let rec = run(&base.initial.to_state(n), &stepper, &base.functions, &base.params, &mut [])
                        .expect("balance run");
                    (1.0 / n as f64, rec)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let pairs: Vec<(f64, &RunRecord)> = levels.iter().map(|(h, r)| (*h, r)).collect();
    let slope = mass_balance_slope(&pairs).expect("slope");
    let residuals: Vec<String> = levels.iter().map(|(_, r)| format!("{:.3e}", r.max_mass_residual())).collect();
    Verdict::new(
        "3 mass balance",
        closed_ok && slope >= MASS_SLOPE_MIN,
        format!(
            "closed system: max relative residual {rel:.3e} over {} steps (tol {CLOSED_REL_TOL:e}); \
             experiment 1 to t = 10 at 25/50/100 cells: residuals [{}], slope {slope:.3} (min {MASS_SLOPE_MIN})",
            rec.total_steps,
            residuals.join(", ")
        ),
    )
}

fn criterion_4(small: &LongRun, large: &LongRun) -> Verdict {
    let [s1, s2] = final_lengths(&small.record);
    let small_ok = s2 > s1;
    let large_ok = large.min_gap > 0.0;
    Verdict::new(
        "4 experiment 1 outcome",
        small_ok && large_ok,
        format!(
            "small alpha: final L = ({s1:.6}, {s2:.6}) at t = {:.1}, {}; large alpha: min over all steps of L1 - L2 = {:.6}, {}",
            small.record.final_state.time,
            if small_ok { "L2 overtakes" } else { "L2 does NOT overtake" },
            large.min_gap,
            if large_ok { "L1 stays ahead" } else { "L1 does NOT stay ahead" },
        ),
    )
}

fn criterion_5(r: &LongRun) -> Verdict {
    let rec = &r.record;
    let mut pass = true;
    let mut parts = Vec::new();
    for j in 0..NEURITES {
        match first_oscillation(&rec.lengths[j], PROMINENCE) {
            Some(o) => parts.push(format!(
                "L{}: peak at t = {:.1}, trough at t = {:.1}, prominence {:.3e}",
                j + 1,
                rec.times[o.peak],
                rec.times[o.trough],
                o.prominence
            )),
            None => {
                pass = false;
                parts.push(format!("L{}: no oscillation with prominence >= {PROMINENCE:e}", j + 1));
            }
        }
    }
    let stationary = rec.termination == Termination::Stationary;
    pass &= stationary;
    let [l1, l2] = final_lengths(rec);
    pass &= l1 != l2;
    parts.push(format!(
        "termination {:?} at t = {:.1}; final L = ({l1:.6}, {l2:.6})",
        rec.termination, rec.final_state.time
    ));
    Verdict::new("5 experiment 2 outcome", pass, parts.join("; "))
}

fn criterion_6() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for f in [0.1, 0.25, 0.4] {
        let spec = StationarySpec {
            f_inf: [f, f],
            lambda_inf: [40.0, 60.0],
            lambda_som_inf: 50.0,
            caps: PoolCaps { soma: 100.0, cone: 100.0 },
            v0: 1.0,
            growth: neurite_growth::experiment::default_stationary_growth(),
            scaled: ScaledOptions::default(),
            probe_steps: STATIONARY_PROBE_STEPS,
            probe_tau: 1e-4,
        };
        match run_stationary(&spec) {
            Ok(out) => {
                let drift = out.probe_drift.unwrap_or(f64::INFINITY);
                pass &= out.residual <= STATIONARY_RESIDUAL_TOL && drift <= STATIONARY_DRIFT_TOL;
                parts.push(format!("f = {f}: residual {:.3e}, drift {drift:.3e}", out.residual));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("f = {f}: {e}"));
            }
        }
    }
    Verdict::new(
        "6 stationary construction",
        pass,
        format!(
            "{}; tol residual {STATIONARY_RESIDUAL_TOL:e}, drift {STATIONARY_DRIFT_TOL:e} over {STATIONARY_PROBE_STEPS} steps",
            parts.join("; ")
        ),
    )
}

/// `value` printed to `decimals` places reads as `printed`.
fn matches_printed(value: f64, printed: &str) -> bool {
    let decimals = printed.split_once('.').map_or(0, |(_, d)| d.len());
    format!("{value:.decimals$}") == printed
}

fn criterion_7() -> Verdict {
    let scales = PhysicalScales::paper_2023();
    let p = scales.nondimensionalize().expect("paper-2023 scales");
    let rho = max_density(130.0, 1000.0, 0.9, 7.0, 3.0).reported;
    let checks = [
        ("kappa_v", p.kappa_v, "2"),
        ("kappa_D", p.kappa_d, "0.004"),
        ("kappa_lambda", p.kappa_lambda, "100"),
        ("ell_min", p.ell_min[0], "0.1"),
        ("Lambda_min", p.lambda_min, "1"),
        ("rho_max", rho, "155"),
        ("c_h", scales.c_h, "58.4"),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, v, printed) in checks {
        let ok = matches_printed(v, printed);
        pass &= ok;
        parts.push(format!("{name} = {v}{}", if ok { "" } else { " (MISMATCH)" }));
    }
    Verdict::new("7 scaling constants", pass, parts.join(", "))
}

fn criterion_8() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for case in StudyCase::ALL {
        let study = case.study(CONVERGENCE_LEVELS);
        let (quantity, expected) = (study.quantity, study.expected_order);
        match study.run() {
            Ok(report) => {
                let order = report.order(quantity).unwrap_or(f64::NAN);
                let ok = (order - expected).abs() <= ORDER_TOL;
                pass &= ok;
                parts.push(format!("{}: {quantity} order {order:.3} (expected {expected} +- {ORDER_TOL})", case.name()));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{}: {e}", case.name()));
            }
        }
    }
    Verdict::new("8 convergence orders", pass, parts.join("; "))
}

fn criterion_9(scratch: &Path) -> Verdict {
    let config = scratch.join("determinism.toml");
    std::fs::write(
        &config,
        "preset = \"experiment-2\"\n\n[stepper]\nt_end = 2.0\n\n[output]\nsample_stride = 100\nsvg = false\n",
    )
    .expect("write config");
    let mut outputs = Vec::new();
    for k in 0..2 {
        let root = scratch.join(format!("run{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_neurite-sim"))
            .arg("simulate")
            .arg(&config)
            .env("NEURITE_OUTPUT_ROOT", &root)
            .output()
            .expect("spawn neurite-sim");
        if !status.status.success() {
            return Verdict::new(
                "9 determinism",
                false,
                format!("neurite-sim failed: {}", String::from_utf8_lossy(&status.stderr)),
            );
        }
        outputs.push(std::fs::read(root.join("determinism").join("series.csv")).expect("series.csv"));
    }
    let same = outputs[0] == outputs[1];
    Verdict::new(
        "9 determinism",
        same && !outputs[0].is_empty(),
        format!(
            "two CLI runs wrote {} and {} bytes of series.csv, {}",
            outputs[0].len(),
            outputs[1].len(),
            if same { "identical" } else { "DIFFERENT" }
        ),
    )
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("temp dir");
    let (long, quick) = thread::scope(|s| {
        let small = s.spawn(|| long_run(ExperimentConfig::from_preset(Preset::ExperimentOne)));
        let large = s.spawn(|| long_run(large_alpha()));
        let two = s.spawn(|| long_run(ExperimentConfig::from_preset(Preset::ExperimentTwo)));
        let quick = [criterion_3(), criterion_6(), criterion_7(), criterion_8(), criterion_9(scratch.path())];
        let long = [small.join().unwrap(), large.join().unwrap(), two.join().unwrap()];
        (long, quick)
    });
    let [small, large, two] = &long;
    let [c3, c6, c7, c8, c9] = quick;
    let verdicts = [
        criterion_1(&[("experiment 1", small), ("experiment 2", two)]),
        criterion_2(&[("experiment 1", small), ("experiment 2", two)]),
        c3,
        criterion_4(small, large),
        criterion_5(two),
        c6,
        c7,
        c8,
        c9,
    ];
    let mut failed = 0;
    for v in &verdicts {
        println!("{} criterion {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria pass", verdicts.len() - failed, verdicts.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
