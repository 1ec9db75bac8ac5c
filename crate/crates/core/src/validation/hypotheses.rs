//! Sampled checks of the structural hypotheses on the coupling functions.
//!
//! Every property is evaluated on a grid of its arguments. A hypothesis
//! passes when no sample violates it by more than [`HYPOTHESIS_TOL`];
//! otherwise it warns and keeps the worst sample. Nothing here is fatal.

use serde::{Deserialize, Serialize};

use crate::model::{DimensionlessParams, ModelFunctions, Production, NEURITES};

pub const HYPOTHESIS_TOL: f64 = 1e-12;

/// Samples per argument axis.
const GRID: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
}

/// A failing evaluation: which property, where, and by how much.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub property: String,
    pub neurite: Option<usize>,
    pub args: Vec<f64>,
    pub value: f64,
    /// Amount by which the property is missed.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub id: String,
    pub status: Status,
    pub samples: usize,
    pub worst: Option<Sample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn get(&self, id: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn status(&self, id: &str) -> Option<Status> {
        self.get(id).map(|c| c.status)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }
}

/// Collects samples of one hypothesis and keeps the worst miss.
struct Tally {
    id: &'static str,
    samples: usize,
    worst: Option<Sample>,
}

impl Tally {
    fn new(id: &'static str) -> Self {
        Tally {
            id,
            samples: 0,
            worst: None,
        }
    }

    /// A property that holds when `miss <= HYPOTHESIS_TOL`.
    fn record(&mut self, property: &str, neurite: Option<usize>, args: &[f64], value: f64, miss: f64) {
        self.samples += 1;
        // NaN counts as the worst possible miss.
        let miss = if miss.is_nan() { f64::INFINITY } else { miss };
        if miss > HYPOTHESIS_TOL {
            self.keep(property, neurite, args, value, miss);
        }
    }

    /// Strict positivity of `value`; zero fails with a miss of zero.
    fn positive(&mut self, property: &str, neurite: Option<usize>, args: &[f64], value: f64) {
        self.samples += 1;
        if value.is_nan() || value <= 0.0 {
            self.keep(property, neurite, args, value, (-value).max(0.0));
        }
    }

    fn keep(&mut self, property: &str, neurite: Option<usize>, args: &[f64], value: f64, miss: f64) {
        let miss = if miss.is_nan() { f64::INFINITY } else { miss };
        if self.worst.as_ref().is_none_or(|w| miss > w.violation) {
            self.worst = Some(Sample {
                property: property.to_string(),
                neurite,
                args: args.to_vec(),
                value,
                violation: miss,
            });
        }
    }

    fn finish(self) -> HypothesisCheck {
        HypothesisCheck {
            id: self.id.to_string(),
            status: if self.worst.is_some() {
                Status::Warn
            } else {
                Status::Pass
            },
            samples: self.samples,
            worst: self.worst,
        }
    }
}

fn axis(lo: f64, hi: f64) -> impl Iterator<Item = f64> + Clone {
    (0..GRID).map(move |i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64)
}

/// Samples (H2) to (H7) for `mf` under the constants `p`.
///
/// Arguments are scaled: densities live in `[0, rho_cap]`, pools in
/// `[0, cap]` of their compartment, lengths in `[ell_min, ell_min + 4]`.
pub fn hypothesis_diagnostics(mf: &ModelFunctions, p: &DimensionlessParams) -> HypothesisReport {
    HypothesisReport {
        checks: vec![
            check_gates(mf, p),
            check_growth(mf, p),
            check_alpha(mf, p),
            check_beta(mf, p),
            check_constants(p),
            check_production(mf),
        ],
    }
}

fn check_gates(mf: &ModelFunctions, p: &DimensionlessParams) -> HypothesisCheck {
    let mut t = Tally::new("H2");
    let cap = p.rho_cap;
    for j in 0..NEURITES {
        for (name, g) in [("g_plus", mf.g_plus[j]), ("g_minus", mf.g_minus[j])] {
            for a in axis(0.0, cap) {
                for b in axis(0.0, cap - a) {
                    let v = g.eval(a, b);
                    t.record(&format!("{name} >= 0"), Some(j), &[a, b], v, -v);
                }
                let v = g.eval(a, cap - a);
                t.record(&format!("{name} = 0 on rho = cap"), Some(j), &[a, cap - a], v, v.abs());
            }
        }
        for s in axis(0.0, cap) {
            let v = mf.g_plus[j].eval(0.0, s);
            t.record("g_plus(0, s) = 0", Some(j), &[0.0, s], v, v.abs());
            let v = mf.g_minus[j].eval(s, 0.0);
            t.record("g_minus(s, 0) = 0", Some(j), &[s, 0.0], v, v.abs());
        }
    }
    t.finish()
}

fn check_growth(mf: &ModelFunctions, p: &DimensionlessParams) -> HypothesisCheck {
    let mut t = Tally::new("H3");
    let cap = p.lambda_cone_cap;
    for j in 0..NEURITES {
        let h = mf.h[j];
        let ell = p.ell_min[j];
        let lengths: Vec<f64> = axis(ell, ell + 4.0).collect();
        let mut has_zero = false;
        for s in axis(0.0, cap) {
            for w in lengths.windows(2) {
                let (lo, hi) = (h.eval(s, w[0]), h.eval(s, w[1]));
                t.record("h increasing in L", Some(j), &[s, w[1]], hi, lo - hi);
                if lo == 0.0 || lo.signum() != hi.signum() {
                    has_zero = true;
                }
            }
            let v = h.eval(s, ell);
            t.positive("h(s, ell) > 0", Some(j), &[s, ell], v);
        }
        let miss = if has_zero { 0.0 } else { f64::INFINITY };
        t.record("h has a zero", Some(j), &[], f64::NAN, miss);
    }
    t.finish()
}

fn check_alpha(mf: &ModelFunctions, p: &DimensionlessParams) -> HypothesisCheck {
    let mut t = Tally::new("H4");
    for j in 0..NEURITES {
        let laws = [
            ("alpha_plus", mf.alpha_plus[j], p.lambda_som_cap),
            ("alpha_minus", mf.alpha_minus[j], p.lambda_cone_cap),
        ];
        for (name, law, cap) in laws {
            let pts: Vec<f64> = axis(0.0, cap).collect();
            for w in pts.windows(2) {
                let (lo, hi) = (law.eval(w[0]), law.eval(w[1]));
                t.record(&format!("{name} increasing"), Some(j), &[w[1]], hi, lo - hi);
            }
            for s in &pts {
                let v = law.eval(*s);
                t.record(&format!("{name} >= 0"), Some(j), &[*s], v, -v);
            }
        }
        let v = mf.alpha_minus[j].eval(0.0);
        t.record("alpha_minus(0) = 0", Some(j), &[0.0], v, v.abs());
    }
    t.finish()
}

fn check_beta(mf: &ModelFunctions, p: &DimensionlessParams) -> HypothesisCheck {
    let mut t = Tally::new("H5");
    for j in 0..NEURITES {
        let laws = [
            ("beta_plus", mf.beta_plus[j], p.lambda_cone_cap),
            ("beta_minus", mf.beta_minus[j], p.lambda_som_cap),
        ];
        for (name, law, cap) in laws {
            for s in axis(0.0, cap) {
                let v = law.eval(s);
                t.record(&format!("{name} >= 0"), Some(j), &[s], v, -v);
            }
        }
        // A zero of beta_plus somewhere in (0, 2 cap].
        let cap = p.lambda_cone_cap;
        let beta = mf.beta_plus[j];
        let pts: Vec<f64> = axis(0.0, 2.0 * cap).skip(1).collect();
        let closest = pts
            .iter()
            .map(|s| beta.eval(*s).abs())
            .fold(f64::INFINITY, f64::min);
        let crosses = pts.windows(2).any(|w| beta.eval(w[0]).signum() != beta.eval(w[1]).signum());
        let miss = if crosses { 0.0 } else { closest };
        t.record("beta_plus has a positive zero", Some(j), &[], closest, miss);
    }
    t.finish()
}

fn check_constants(p: &DimensionlessParams) -> HypothesisCheck {
    let mut t = Tally::new("H6");
    for (name, v) in [("kappa_v", p.kappa_v), ("kappa_d", p.kappa_d)] {
        t.positive(&format!("{name} > 0"), None, &[], v);
    }
    for j in 0..NEURITES {
        t.positive("kappa_h > 0", Some(j), &[], p.kappa_h(j));
    }
    let l = p.kappa_lambda;
    t.record("kappa_lambda >= 0", None, &[], l, -l);
    t.finish()
}

fn check_production(mf: &ModelFunctions) -> HypothesisCheck {
    let mut t = Tally::new("H7");
    let limit = match mf.gamma {
        Production::Zero => 0.0,
        Production::Constant { value } => value,
        Production::Decaying { rate, .. } if rate > 0.0 => 0.0,
        Production::Decaying { amplitude, .. } => amplitude,
    };
    t.record("gamma -> 0", None, &[], limit, limit.abs());
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets::{setup, Preset};
    use crate::model::{EntryGate, RateLaw};

    #[test]
    fn section4_linear_passes_gate_and_rate_hypotheses() {
        let s = setup(Preset::Section4Linear);
        let r = hypothesis_diagnostics(&s.functions, &s.params);
        for id in ["H2", "H4", "H5", "H6", "H7"] {
            assert_eq!(r.status(id), Some(Status::Pass), "{id}: {:?}", r.get(id));
        }
    }

    #[test]
    fn experiment_one_gate_warns_with_the_empty_lane_value() {
        let s = setup(Preset::ExperimentOne);
        let r = hypothesis_diagnostics(&s.functions, &s.params);
        let h2 = r.get("H2").unwrap();
        assert_eq!(h2.status, Status::Warn);
        let w = h2.worst.as_ref().unwrap();
        // g_plus(0, s) = 1 - s / 2 peaks at s = 0.
        assert!((w.value - 1.0).abs() < 1e-15, "{w:?}");
        assert_eq!(r.status("H5"), Some(Status::Pass));
        // beta_plus(2) = 0.7 (1 - 1)
        assert_eq!(s.functions.beta_plus[0].eval(2.0), 0.0);
    }

    #[test]
    fn growth_law_below_threshold_warns() {
        let s = setup(Preset::ExperimentOne);
        let r = hypothesis_diagnostics(&s.functions, &s.params);
        // atan(s - 1) < 0 for s < 1, so h(s, ell) > 0 cannot hold everywhere.
        assert_eq!(r.status("H3"), Some(Status::Warn));
    }

    #[test]
    fn negative_gate_and_missing_beta_zero_are_reported() {
        let s = setup(Preset::Section4Linear);
        let mut mf = s.functions.clone();
        mf.g_minus[1] = EntryGate::Vacancy { cap: 1.0 };
        mf.beta_plus[0] = RateLaw::Constant { value: 0.3 };
        mf.gamma = Production::Constant { value: 0.2 };
        let r = hypothesis_diagnostics(&mf, &s.params);
        let h2 = r.get("H2").unwrap().worst.clone().unwrap();
        assert_eq!(h2.neurite, Some(1));
        // 1 - rho with rho up to 2 reaches -1.
        assert!((h2.violation - 1.0).abs() < 1e-12, "{h2:?}");
        let h5 = r.get("H5").unwrap().worst.clone().unwrap();
        assert!((h5.violation - 0.3).abs() < 1e-15);
        assert_eq!(r.status("H7"), Some(Status::Warn));
        assert!(!r.all_pass());
    }

    #[test]
    fn report_serializes() {
        let s = setup(Preset::ExperimentTwo);
        let r = hypothesis_diagnostics(&s.functions, &s.params);
        let text = serde_json::to_string(&r).unwrap();
        let back: HypothesisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks.len(), 6);
    }
}
