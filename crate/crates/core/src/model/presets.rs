//! Named function sets, constants and initial data.
//!
//! * `section4-linear`: entry gates `f_i (1 - rho / cap)` with affine
//!   exchange rates, the family that admits constant stationary states.
//! * `experiment-1`: local competition between growth cones.
//! * `experiment-2`: soma release coupled to returning retrograde vesicles.

use super::functions::{Direction, EntryGate, GrowthLaw, ModelFunctions, Production, RateLaw};
use super::params::{DimensionlessParams, NEURITES};
use super::state::{InitialData, Profile};
use crate::scaling::PhysicalScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Section4Linear,
    ExperimentOne,
    ExperimentTwo,
}

impl Preset {
    pub const ALL: [Preset; 3] = [
        Preset::Section4Linear,
        Preset::ExperimentOne,
        Preset::ExperimentTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Section4Linear => "section4-linear",
            Preset::ExperimentOne => "experiment-1",
            Preset::ExperimentTwo => "experiment-2",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// Everything a preset fixes.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetSetup {
    pub functions: ModelFunctions,
    pub params: DimensionlessParams,
    pub initial: InitialData,
}

pub fn setup(preset: Preset) -> PresetSetup {
    setup_from(preset, base_params())
}

/// Like [`setup`], starting from `base` instead of the paper-2023 constants.
/// The experiments still apply their own motor speed and switching rate.
pub fn setup_from(preset: Preset, base: DimensionlessParams) -> PresetSetup {
    match preset {
        Preset::Section4Linear => {
            let params = base;
            PresetSetup {
                functions: section4_linear(&params),
                initial: experiment_one_initial(),
                params,
            }
        }
        Preset::ExperimentOne => {
            let params = experiment_params(base, 0.1);
            PresetSetup {
                functions: experiment_one(&params),
                initial: experiment_one_initial(),
                params,
            }
        }
        Preset::ExperimentTwo => {
            let params = experiment_params(base, 0.04);
            PresetSetup {
                functions: experiment_two(&params),
                initial: experiment_two_initial(),
                params,
            }
        }
    }
}

pub fn base_params() -> DimensionlessParams {
    PhysicalScales::paper_2023()
        .nondimensionalize()
        .expect("built-in scale set is valid")
}

/// `base` with the experiments' motor speed and no direction switching.
fn experiment_params(base: DimensionlessParams, kappa_v: f64) -> DimensionlessParams {
    DimensionlessParams {
        kappa_v,
        kappa_lambda: 0.0,
        ..base
    }
}

/// Switching growth law: `atan(Lambda - Lambda_min)` gated by a logistic in
/// the length, `1 / (1 + exp(-4 (L - L_min - 0.2)))`.
pub fn switching_growth(p: &DimensionlessParams, j: usize) -> GrowthLaw {
    GrowthLaw::ArctanLogistic {
        lambda_min: p.lambda_min,
        ell_min: p.ell_min[j],
        steepness: 4.0,
        offset: 0.2,
    }
}

/// Gates `g_i = f_i (1 - rho / cap)`, `alpha` rising and `beta` falling in
/// their pool level, coefficients taken from `p`.
pub fn section4_linear(p: &DimensionlessParams) -> ModelFunctions {
    let cap = p.rho_cap;
    ModelFunctions {
        alpha_plus: std::array::from_fn(|j| RateLaw::Rising {
            coef: p.kappa_alpha_plus[j],
            cap: p.lambda_som_cap,
        }),
        alpha_minus: std::array::from_fn(|j| RateLaw::Rising {
            coef: p.kappa_alpha_minus[j],
            cap: p.lambda_cone_cap,
        }),
        beta_plus: std::array::from_fn(|j| RateLaw::Falling {
            coef: p.kappa_beta_plus[j],
            cap: p.lambda_cone_cap,
        }),
        beta_minus: std::array::from_fn(|j| RateLaw::Falling {
            coef: p.kappa_beta_minus[j],
            cap: p.lambda_som_cap,
        }),
        g_plus: [EntryGate::Own {
            direction: Direction::Antero,
            cap,
        }; NEURITES],
        g_minus: [EntryGate::Own {
            direction: Direction::Retro,
            cap,
        }; NEURITES],
        h: std::array::from_fn(|j| switching_growth(p, j)),
        gamma: Production::Zero,
    }
}

pub fn experiment_one(p: &DimensionlessParams) -> ModelFunctions {
    let cap = p.lambda_cone_cap;
    ModelFunctions {
        alpha_plus: [RateLaw::Rising {
            coef: 0.05,
            cap: p.lambda_som_cap,
        }; NEURITES],
        alpha_minus: [RateLaw::Hump { coef: 0.1, cap }; NEURITES],
        beta_plus: [RateLaw::Falling { coef: 0.7, cap }; NEURITES],
        beta_minus: [RateLaw::Falling {
            coef: 0.7,
            cap: p.lambda_som_cap,
        }; NEURITES],
        g_plus: [EntryGate::Vacancy { cap: p.rho_cap }; NEURITES],
        g_minus: [EntryGate::Vacancy { cap: p.rho_cap }; NEURITES],
        h: std::array::from_fn(|j| switching_growth(p, j)),
        gamma: Production::Zero,
    }
}

pub fn experiment_two(p: &DimensionlessParams) -> ModelFunctions {
    let cap = p.lambda_cone_cap;
    ModelFunctions {
        alpha_plus: [RateLaw::Rising {
            coef: 0.6,
            cap: p.lambda_som_cap,
        }; NEURITES],
        alpha_minus: [RateLaw::Hump { coef: 1.0, cap }; NEURITES],
        g_plus: [EntryGate::RetroSensing {
            cap: p.rho_cap,
            slope: 3.0,
            floor: 0.1,
            shift: 0.5,
        }; NEURITES],
        ..experiment_one(p)
    }
}

pub fn experiment_one_initial() -> InitialData {
    InitialData {
        lengths: [1.1, 1.0],
        lambda_som: 1.0,
        lambda: [0.25, 1.5],
        f_plus: [Profile::Constant(0.1), Profile::Constant(0.1)],
        f_minus: [Profile::Constant(0.1), Profile::Constant(0.1)],
    }
}

pub fn experiment_two_initial() -> InitialData {
    InitialData {
        lengths: [1.1, 1.0],
        lambda_som: 1.0,
        lambda: [0.9, 0.9],
        f_plus: [Profile::Constant(0.0), Profile::Constant(0.0)],
        f_minus: [Profile::Constant(0.0), Profile::Constant(0.0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("experiment-3"), None);
    }

    #[test]
    fn experiment_one_functions() {
        let s = setup(Preset::ExperimentOne);
        let mf = &s.functions;
        assert!((mf.alpha_plus[0].eval(1.0) - 0.025).abs() < 1e-15);
        assert!((mf.beta_plus[1].eval(1.0) - 0.35).abs() < 1e-15);
        assert!((mf.beta_minus[0].eval(0.5) - 0.525).abs() < 1e-15);
        assert!((mf.alpha_minus[0].eval(1.0) - 0.025).abs() < 1e-15);
        assert!((mf.g_plus[0].eval(0.1, 0.1) - 0.9).abs() < 1e-15);
        assert_eq!(s.params.kappa_v, 0.1);
        assert_eq!(s.params.kappa_lambda, 0.0);
        assert_eq!(s.initial.lambda, [0.25, 1.5]);
        assert_eq!(s.initial.lengths, [1.1, 1.0]);
    }

    #[test]
    fn experiment_two_functions() {
        let s = setup(Preset::ExperimentTwo);
        let mf = &s.functions;
        assert!((mf.alpha_plus[0].eval(1.0) - 0.3).abs() < 1e-15);
        assert!((mf.alpha_minus[0].eval(1.0) - 0.25).abs() < 1e-15);
        let g = mf.g_plus[0].eval(0.2, 0.1);
        let expected = ((0.49f64 + 0.1).sqrt() + 0.5) * (1.0 - 0.15);
        assert!((g - expected).abs() < 1e-15);
        assert_eq!(s.params.kappa_v, 0.04);
        assert_eq!(s.initial.lambda, [0.9, 0.9]);
        assert_eq!(s.initial.f_plus[0], Profile::Constant(0.0));
    }

    #[test]
    fn section4_gates_vanish_where_required() {
        let s = setup(Preset::Section4Linear);
        let mf = &s.functions;
        let cap = s.params.rho_cap;
        for i in 0..=10 {
            let a = cap * i as f64 / 10.0;
            let b = cap - a;
            assert!(mf.g_plus[0].eval(a, b).abs() < 1e-15);
            assert!(mf.g_minus[0].eval(a, b).abs() < 1e-15);
            assert_eq!(mf.g_plus[0].eval(0.0, a), 0.0);
            assert_eq!(mf.g_minus[0].eval(a, 0.0), 0.0);
        }
    }
}
