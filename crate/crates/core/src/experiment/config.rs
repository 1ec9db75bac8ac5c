//! TOML experiment configuration.
//!
//! A config starts from a preset (or from the paper-2023 constants when no
//! preset is named) and overlays the tables it contains. Overlay tables may
//! name any subset of the fields of the value they modify; unknown keys are
//! errors. See `docs/config.md` for the full format.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::integrator::StepperConfig;
use crate::model::presets::{self, Preset};
use crate::model::{DimensionlessParams, InitialData, ModelFunctions, SimState, NEURITES};
use crate::scaling::PhysicalScales;
use crate::stationary::{PoolCaps, ScaledOptions};
use crate::model::GrowthLaw;

/// Default resolution: 100 elements, 101 cells.
pub const DEFAULT_CELLS: usize = 101;

/// Config file as written, before presets are expanded.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    preset: Option<String>,
    scales: Option<Value>,
    params: Option<Table>,
    functions: Option<Table>,
    initial: Option<Table>,
    n_cells: Option<usize>,
    stepper: Option<Table>,
    output: Option<Table>,
    stationary: Option<Table>,
}

/// Output controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory below the output root; defaults to the config name.
    pub dir: Option<String>,
    /// Series row every `sample_stride` steps.
    pub sample_stride: u64,
    pub snapshot_times: Vec<f64>,
    pub svg: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: None,
            sample_stride: 1000,
            snapshot_times: Vec::new(),
            svg: true,
        }
    }
}

/// Input of the `stationary` subcommand, in the unscaled convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarySpec {
    pub f_inf: [f64; NEURITES],
    pub lambda_inf: [f64; NEURITES],
    pub lambda_som_inf: f64,
    pub caps: PoolCaps,
    #[serde(default = "unit")]
    pub v0: f64,
    /// Growth laws whose zeros fix the lengths; by default
    /// `h = (Lambda - 1) + (L - 1)` on the scaled cone level.
    #[serde(default = "default_stationary_growth")]
    pub growth: [GrowthLaw; NEURITES],
    #[serde(default)]
    pub scaled: ScaledOptions,
    /// Steps of a probe run from the constant state; 0 skips it.
    #[serde(default)]
    pub probe_steps: u64,
    #[serde(default = "default_probe_tau")]
    pub probe_tau: f64,
}

fn unit() -> f64 {
    1.0
}

fn default_probe_tau() -> f64 {
    1e-4
}

pub fn default_stationary_growth() -> [GrowthLaw; NEURITES] {
    [GrowthLaw::Linear {
        lambda_slope: 1.0,
        length_slope: 1.0,
        lambda_ref: 1.0,
        length_ref: 1.0,
    }; NEURITES]
}

/// A fully expanded and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub preset: Option<String>,
    pub functions: ModelFunctions,
    pub params: DimensionlessParams,
    pub initial: InitialData,
    pub n_cells: usize,
    pub stepper: StepperConfig,
    pub output: OutputSpec,
    pub stationary: Option<StationarySpec>,
    /// File the config was read from, if any.
    #[serde(skip)]
    pub source: Option<PathBuf>,
}

impl ExperimentConfig {
    /// A preset with its default settings.
    pub fn from_preset(preset: Preset) -> Self {
        let s = presets::setup(preset);
        ExperimentConfig {
            name: preset.name().to_string(),
            preset: Some(preset.name().to_string()),
            functions: s.functions,
            params: s.params,
            initial: s.initial,
            n_cells: DEFAULT_CELLS,
            stepper: StepperConfig::default(),
            output: OutputSpec::default(),
            stationary: None,
            source: None,
        }
    }

    /// Directory name below the output root.
    pub fn output_dir(&self) -> &str {
        self.output.dir.as_deref().unwrap_or(&self.name)
    }

    /// Stepper settings with the output sampling folded in.
    pub fn stepper_config(&self) -> StepperConfig {
        StepperConfig {
            sample_stride: self.output.sample_stride,
            snapshot_times: self.output.snapshot_times.clone(),
            ..self.stepper.clone()
        }
    }

    pub fn initial_state(&self) -> SimState {
        self.initial.to_state(self.n_cells)
    }

    /// Checks parameters, solver settings and the hypotheses on the data.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.stepper_config().validate()?;
        if self.n_cells < 3 {
            return Err(Error::GridTooSmall {
                min: 3,
                got: self.n_cells,
            });
        }
        check_initial_data(&self.initial, &self.params, self.n_cells)
    }
}

/// (H0) and (H1) on the initial data.
pub fn check_initial_data(init: &InitialData, p: &DimensionlessParams, n_cells: usize) -> Result<()> {
    let pools = [("Lambda_som", init.lambda_som), ("Lambda_1", init.lambda[0]), ("Lambda_2", init.lambda[1])];
    for (name, v) in pools {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Hypothesis {
                hypothesis: "(H0)",
                detail: format!("{name}^0 must be > 0, got {v}"),
            });
        }
    }
    for j in 0..NEURITES {
        if !(init.lengths[j] >= p.ell_min[j] && init.lengths[j].is_finite()) {
            return Err(Error::Hypothesis {
                hypothesis: "(H0)",
                detail: format!(
                    "L_{}^0 = {} is below the minimal length {}",
                    j + 1,
                    init.lengths[j],
                    p.ell_min[j]
                ),
            });
        }
    }
    let state = init.to_state(n_cells);
    for (j, field) in state.fields.iter().enumerate() {
        let min = field.min_density();
        if !(min >= 0.0) {
            return Err(Error::Hypothesis {
                hypothesis: "(H1)",
                detail: format!("initial density of neurite {} is negative ({min})", j + 1),
            });
        }
        let max = field.max_rho();
        if !(max <= p.rho_cap) {
            return Err(Error::Hypothesis {
                hypothesis: "(H1)",
                detail: format!(
                    "initial rho of neurite {} reaches {max}, above the cap {}",
                    j + 1,
                    p.rho_cap
                ),
            });
        }
    }
    Ok(())
}

/// Reads, expands and validates a config file. Without a `name` key the
/// file stem names the run.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let (mut cfg, named) = parse_named(&text, &path.display().to_string())?;
    if !named {
        cfg.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
    }
    cfg.source = Some(path.to_path_buf());
    Ok(cfg)
}

/// Parses config text; `origin` labels errors. An unnamed config gets the
/// preset name, or an empty name for the caller to fill in.
pub fn parse_config(text: &str, origin: &str) -> Result<ExperimentConfig> {
    parse_named(text, origin).map(|(cfg, _)| cfg)
}

/// Like [`parse_config`], also telling whether the text set `name`.
fn parse_named(text: &str, origin: &str) -> Result<(ExperimentConfig, bool)> {
    let err = |message: String| Error::Config {
        path: origin.to_string(),
        message,
    };
    let raw: RawConfig = toml::from_str(text).map_err(|e| err(e.to_string()))?;

    let preset = match &raw.preset {
        Some(name) => Some(Preset::from_name(name).ok_or_else(|| {
            let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            err(format!("unknown preset `{name}` (known: {})", known.join(", ")))
        })?),
        None => None,
    };
    if raw.scales.is_some() && raw.params.is_some() {
        return Err(err(
            "`scales` and `params` are mutually exclusive; give one or the other".into(),
        ));
    }
    let base = match &raw.scales {
        Some(v) => {
            let scales = resolve_scales(v).map_err(|m| err(format!("[scales]: {m}")))?;
            scales.nondimensionalize().map_err(|e| err(format!("[scales]: {e}")))?
        }
        None => presets::base_params(),
    };

    let (functions, params, initial) = match preset {
        Some(p) => {
            let s = presets::setup_from(p, base);
            (Some(s.functions), s.params, Some(s.initial))
        }
        None => (None, base, None),
    };

    let params = match &raw.params {
        Some(t) => overlay(&params, t, "params").map_err(err)?,
        None => params,
    };
    let functions = match (functions, &raw.functions) {
        (Some(f), Some(t)) => overlay(&f, t, "functions").map_err(err)?,
        (Some(f), None) => f,
        (None, Some(t)) => complete::<ModelFunctions>(t, "functions").map_err(err)?,
        (None, None) => return Err(err("give a `preset` or a complete [functions] table".into())),
    };
    let initial = match (initial, &raw.initial) {
        (Some(i), Some(t)) => overlay(&i, t, "initial").map_err(err)?,
        (Some(i), None) => i,
        (None, Some(t)) => complete::<InitialData>(t, "initial").map_err(err)?,
        (None, None) => return Err(err("give a `preset` or a complete [initial] table".into())),
    };
    let stepper = match &raw.stepper {
        Some(t) => overlay(&StepperConfig::default(), t, "stepper").map_err(err)?,
        None => StepperConfig::default(),
    };
    let output = match &raw.output {
        Some(t) => complete::<OutputSpec>(t, "output").map_err(err)?,
        None => OutputSpec::default(),
    };
    let stationary = match &raw.stationary {
        Some(t) => Some(complete::<StationarySpec>(t, "stationary").map_err(err)?),
        None => None,
    };
    let named = raw.name.is_some();
    let cfg = ExperimentConfig {
        name: raw
            .name
            .or_else(|| preset.map(|p| p.name().to_string()))
            .unwrap_or_default(),
        preset: preset.map(|p| p.name().to_string()),
        functions,
        params,
        initial,
        n_cells: raw.n_cells.unwrap_or(DEFAULT_CELLS),
        stepper,
        output,
        stationary,
        source: None,
    };
    cfg.validate().map_err(|e| match e {
        Error::Hypothesis { .. } => e,
        other => err(other.to_string()),
    })?;
    Ok((cfg, named))
}

fn resolve_scales(v: &Value) -> std::result::Result<PhysicalScales, String> {
    match v {
        Value::String(name) => {
            PhysicalScales::by_name(name).ok_or_else(|| format!("unknown scale set `{name}`"))
        }
        Value::Table(t) => {
            let mut t = t.clone();
            let base = match t.remove("base") {
                Some(Value::String(name)) => PhysicalScales::by_name(&name)
                    .ok_or_else(|| format!("unknown scale set `{name}`"))?,
                Some(other) => return Err(format!("`base` must be a string, got {other}")),
                None => PhysicalScales::paper_2023(),
            };
            overlay(&base, &t, "scales")
        }
        other => Err(format!("expected a scale-set name or a table, got {other}")),
    }
}

/// `base` with the keys of `patch` replaced. Nested tables merge; every other
/// value is replaced whole.
fn overlay<T>(base: &T, patch: &Table, section: &str) -> std::result::Result<T, String>
where
    T: Serialize + for<'de> Deserialize<'de>,
{
    let mut value = Value::try_from(base).map_err(|e| format!("[{section}]: {e}"))?;
    merge(&mut value, patch, section)?;
    value.try_into().map_err(|e| format!("[{section}]: {e}"))
}

fn merge(target: &mut Value, patch: &Table, path: &str) -> std::result::Result<(), String> {
    let Value::Table(table) = target else {
        return Err(format!("[{path}] is not a table"));
    };
    for (key, new) in patch {
        let field = format!("{path}.{key}");
        match table.get_mut(key) {
            None => return Err(format!("unknown field `{field}`")),
            Some(slot) => match (slot, new) {
                (slot @ Value::Table(_), Value::Table(sub)) if !sub.contains_key("kind") => {
                    merge(slot, sub, &field)?
                }
                (slot, new) => *slot = new.clone(),
            },
        }
    }
    Ok(())
}

fn complete<T>(t: &Table, section: &str) -> std::result::Result<T, String>
where
    T: for<'de> Deserialize<'de>,
{
    Value::Table(t.clone())
        .try_into()
        .map_err(|e| format!("[{section}]: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EntryGate, Profile, RateLaw};

    #[test]
    fn experiment_one_preset_expands() {
        let cfg = parse_config("preset = \"experiment-1\"", "inline").unwrap();
        assert_eq!(cfg.name, "experiment-1");
        let mf = &cfg.functions;
        assert!((mf.alpha_plus[0].eval(1.0) - 0.025).abs() < 1e-15);
        assert!((mf.beta_plus[0].eval(1.0) - 0.35).abs() < 1e-15);
        assert!((mf.beta_minus[1].eval(1.0) - 0.35).abs() < 1e-15);
        assert_eq!(cfg.params.kappa_v, 0.1);
        assert_eq!(cfg.initial.lambda, [0.25, 1.5]);
        assert_eq!(cfg.n_cells, 101);
        assert_eq!(cfg.stepper.tau, 1e-4);
    }

    #[test]
    fn experiment_two_preset_expands() {
        let cfg = parse_config("preset = \"experiment-2\"", "inline").unwrap();
        assert!((cfg.functions.alpha_plus[0].eval(2.0) - 0.6).abs() < 1e-15);
        assert_eq!(cfg.params.kappa_v, 0.04);
        assert!(matches!(cfg.functions.g_plus[0], EntryGate::RetroSensing { slope, floor, shift, .. }
            if slope == 3.0 && floor == 0.1 && shift == 0.5));
        assert_eq!(cfg.initial.f_plus[0], Profile::Constant(0.0));
    }

    #[test]
    fn overlays_replace_only_named_fields() {
        let text = r#"
            preset = "experiment-1"
            name = "large-alpha"
            n_cells = 51
            [functions]
            alpha_plus = [{ kind = "rising", coef = 1.0, cap = 2.0 }, { kind = "rising", coef = 1.0, cap = 2.0 }]
            [params]
            kappa_l = 0.05
            mass_units = { soma = 2.0 }
            [initial]
            lengths = [1.2, 1.0]
            f_plus = [0.1, [0.0, 0.2]]
            [stepper]
            t_end = 5.0
            [output]
            sample_stride = 10
            snapshot_times = [1.0, 2.0]
        "#;
        let cfg = parse_config(text, "inline").unwrap();
        assert_eq!(cfg.name, "large-alpha");
        assert_eq!(cfg.n_cells, 51);
        assert_eq!(cfg.functions.alpha_plus[1], RateLaw::Rising { coef: 1.0, cap: 2.0 });
        assert!((cfg.functions.beta_plus[0].eval(1.0) - 0.35).abs() < 1e-15);
        assert_eq!(cfg.params.kappa_l, 0.05);
        assert_eq!(cfg.params.kappa_v, 0.1);
        assert_eq!(cfg.params.mass_units.soma, 2.0);
        assert_eq!(cfg.params.mass_units.density, presets::base_params().mass_units.density);
        assert_eq!(cfg.initial.lengths, [1.2, 1.0]);
        assert_eq!(cfg.initial.f_plus[1], Profile::Table(vec![0.0, 0.2]));
        assert_eq!(cfg.initial.lambda, [0.25, 1.5]);
        assert_eq!(cfg.stepper.t_end, 5.0);
        assert_eq!(cfg.stepper.tau, 1e-4);
        let sc = cfg.stepper_config();
        assert_eq!(sc.sample_stride, 10);
        assert_eq!(sc.snapshot_times, vec![1.0, 2.0]);
    }

    #[test]
    fn short_initial_length_cites_h0() {
        let text = "preset = \"experiment-1\"\n[initial]\nlengths = [0.05, 1.0]\n";
        match parse_config(text, "inline") {
            Err(Error::Hypothesis { hypothesis, detail }) => {
                assert_eq!(hypothesis, "(H0)");
                assert!(detail.contains("L_1^0"), "{detail}");
            }
            other => panic!("expected (H0) rejection, got {other:?}"),
        }
    }

    #[test]
    fn overfull_initial_density_cites_h1() {
        let text = "preset = \"experiment-1\"\n[initial]\nf_plus = [1.5, 0.1]\nf_minus = [1.5, 0.1]\n";
        assert!(matches!(
            parse_config(text, "inline"),
            Err(Error::Hypothesis { hypothesis: "(H1)", .. })
        ));
    }

    #[test]
    fn scales_and_params_are_exclusive() {
        let text = "preset = \"experiment-1\"\nscales = \"paper-2023\"\n[params]\nkappa_v = 1.0\n";
        let e = parse_config(text, "inline").unwrap_err().to_string();
        assert!(e.contains("mutually exclusive"), "{e}");
    }

    #[test]
    fn scales_table_feeds_the_preset() {
        let text = "preset = \"section4-linear\"\n[scales]\nv0 = 0.5\n";
        let cfg = parse_config(text, "inline").unwrap();
        assert!((cfg.params.kappa_v - 1.0).abs() < 1e-15);
        let named = parse_config("preset = \"experiment-2\"\nscales = \"paper-2023\"", "x").unwrap();
        assert_eq!(named.params.kappa_v, 0.04);
    }

    #[test]
    fn parse_errors_carry_line_and_field() {
        let text = "preset = \"experiment-1\"\n\n[params]\nkappa_v = \"fast\"\n";
        let e = parse_config(text, "cfg.toml").unwrap_err().to_string();
        assert!(e.contains("cfg.toml") && e.contains("kappa_v"), "{e}");
        let e = parse_config("preset = \"experiment-1\"\nn_cells = = 3\n", "cfg.toml")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_config("preset = \"experiment-1\"\n[params]\nkapa_v = 1.0\n", "c")
            .unwrap_err()
            .to_string();
        assert!(e.contains("params.kapa_v"), "{e}");
        let e = parse_config("preset = \"experiment-9\"", "c").unwrap_err().to_string();
        assert!(e.contains("experiment-9"), "{e}");
    }

    #[test]
    fn explicit_functions_without_preset() {
        let mf = presets::setup(Preset::Section4Linear).functions;
        let init = presets::experiment_one_initial();
        let mut t = Table::new();
        t.insert("functions".into(), Value::try_from(&mf).unwrap());
        t.insert("initial".into(), Value::try_from(&init).unwrap());
        t.insert("name".into(), Value::String("custom".into()));
        let text = toml::to_string(&t).unwrap();
        let cfg = parse_config(&text, "inline").unwrap();
        assert_eq!(cfg.functions, mf);
        assert_eq!(cfg.params, presets::base_params());
        let e = parse_config("name = \"x\"", "inline").unwrap_err().to_string();
        assert!(e.contains("preset"), "{e}");
    }

    #[test]
    fn stationary_section() {
        let text = r#"
            preset = "section4-linear"
            [stationary]
            f_inf = [0.25, 0.25]
            lambda_inf = [50.0, 50.0]
            lambda_som_inf = 50.0
            caps = { soma = 100.0, cone = 100.0 }
        "#;
        let cfg = parse_config(text, "inline").unwrap();
        let s = cfg.stationary.unwrap();
        assert_eq!(s.v0, 1.0);
        assert_eq!(s.scaled.n_cells, 101);
        assert_eq!(s.growth, default_stationary_growth());
    }
}
