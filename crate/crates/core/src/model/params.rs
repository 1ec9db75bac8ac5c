use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Number of neurites attached to the soma.
pub const NEURITES: usize = 2;

/// Vesicle counts represented by one unit of each scaled compartment.
///
/// `density` is the number of vesicles in one unit of scaled neurite mass
/// (`L * integral of rho dy`), `soma` and `cone` the vesicles in one unit of
/// the respective scaled pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassUnits {
    pub density: f64,
    pub soma: f64,
    pub cone: f64,
}

impl MassUnits {
    pub const UNIT: MassUnits = MassUnits {
        density: 1.0,
        soma: 1.0,
        cone: 1.0,
    };
}

impl Default for MassUnits {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Constants of the scaled model.
///
/// `kappa_som` and `kappa_cone` multiply the boundary flux values when they
/// enter the pool equations. The vesicle ledger closes when
/// `kappa_som * mass_units.soma == mass_units.density` (same for the cones).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub kappa_v: f64,
    pub kappa_d: f64,
    pub kappa_lambda: f64,
    pub kappa_alpha_plus: [f64; NEURITES],
    pub kappa_alpha_minus: [f64; NEURITES],
    pub kappa_beta_plus: [f64; NEURITES],
    pub kappa_beta_minus: [f64; NEURITES],
    pub kappa_som: f64,
    pub kappa_cone: f64,
    pub kappa_gamma: f64,
    pub kappa_l: f64,
    /// Cone vesicles consumed per unit of scaled length growth.
    pub c_growth: [f64; NEURITES],
    pub rho_cap: f64,
    pub lambda_som_cap: f64,
    pub lambda_cone_cap: f64,
    pub ell_min: [f64; NEURITES],
    pub lambda_min: f64,
    #[serde(default)]
    pub mass_units: MassUnits,
    /// Smoothing knob carried with the solver settings. Not bound to any term.
    #[serde(default = "default_eta")]
    pub eta: f64,
}

fn default_eta() -> f64 {
    10.0
}

impl DimensionlessParams {
    /// Growth-consumption constant of cone `j` in the pool equation.
    pub fn kappa_h(&self, j: usize) -> f64 {
        self.c_growth[j] * self.kappa_l
    }

    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("kappa_v", self.kappa_v),
            ("kappa_d", self.kappa_d),
            ("kappa_lambda", self.kappa_lambda),
            ("kappa_som", self.kappa_som),
            ("kappa_cone", self.kappa_cone),
            ("kappa_gamma", self.kappa_gamma),
            ("kappa_l", self.kappa_l),
            ("lambda_min", self.lambda_min),
        ];
        for (name, v) in scalars {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        let arrays = [
            ("kappa_alpha_plus", self.kappa_alpha_plus),
            ("kappa_alpha_minus", self.kappa_alpha_minus),
            ("kappa_beta_plus", self.kappa_beta_plus),
            ("kappa_beta_minus", self.kappa_beta_minus),
            ("c_growth", self.c_growth),
        ];
        for (name, arr) in arrays {
            if arr.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(invalid(name, format!("entries must be finite and >= 0, got {arr:?}")));
            }
        }
        for (name, v) in [
            ("rho_cap", self.rho_cap),
            ("lambda_som_cap", self.lambda_som_cap),
            ("lambda_cone_cap", self.lambda_cone_cap),
            ("mass_units.density", self.mass_units.density),
            ("mass_units.soma", self.mass_units.soma),
            ("mass_units.cone", self.mass_units.cone),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.ell_min.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(invalid("ell_min", format!("entries must be > 0, got {:?}", self.ell_min)));
        }
        Ok(())
    }
}
