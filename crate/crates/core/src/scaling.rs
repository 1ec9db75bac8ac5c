//! Physical typical scales and the map to the scaled model constants.
//!
//! Units follow one convention throughout: lengths in μm, times in s,
//! vesicle counts dimensionless, diameters in nm.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{DimensionlessParams, MassUnits, NEURITES};

/// Typical values used to scale the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScales {
    /// Typical length (μm).
    pub l_typ: f64,
    /// Typical time (s).
    pub t_typ: f64,
    /// Diffusion constant (μm²/s).
    pub d_t: f64,
    /// Motor velocity (μm/s).
    pub v0: f64,
    /// Direction switching rate (1/s).
    pub lambda_rate: f64,
    /// Common magnitude of the in/outflow velocities (μm/s).
    pub c_inout: f64,
    /// Typical production in the soma (vesicles/s).
    pub gamma_typ: f64,
    /// Typical density of each direction (vesicles/μm).
    pub f_typ: f64,
    /// Maximal density (vesicles/μm).
    pub rho_max: f64,
    /// Vesicles consumed per μm of growth.
    pub c_h: f64,
    pub lambda_som_max: f64,
    pub lambda_cone_max: f64,
    pub lambda_som_typ: f64,
    pub lambda_cone_typ: f64,
    /// Typical growth speed (μm/s).
    pub h_typ: f64,
    /// Minimal neurite length (μm).
    pub l_min: f64,
    /// Cone level at which growth switches to shrinkage (vesicles).
    pub lambda_min: f64,
    /// Vesicle diameter (nm).
    pub vesicle_diameter: f64,
    /// Neurite diameter (nm).
    pub neurite_diameter: f64,
}

impl PhysicalScales {
    /// The built-in "paper-2023" scale set.
    pub fn paper_2023() -> Self {
        let rho_max = max_density(130.0, 1000.0, 0.9, 7.0, 3.0).reported;
        PhysicalScales {
            l_typ: 50.0,
            t_typ: 100.0,
            d_t: 0.1,
            v0: 1.0,
            lambda_rate: 1.0,
            c_inout: 0.1,
            gamma_typ: 10.0,
            f_typ: 39.0,
            rho_max,
            c_h: 58.4,
            lambda_som_max: 6000.0,
            lambda_cone_max: 100.0,
            lambda_som_typ: 3000.0,
            lambda_cone_typ: 50.0,
            h_typ: 0.01,
            l_min: 5.0,
            lambda_min: 50.0,
            vesicle_diameter: 130.0,
            neurite_diameter: 1000.0,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "paper-2023" => Some(Self::paper_2023()),
            _ => None,
        }
    }

    fn fields(&self) -> [(&'static str, f64); 19] {
        [
            ("l_typ", self.l_typ),
            ("t_typ", self.t_typ),
            ("d_t", self.d_t),
            ("v0", self.v0),
            ("lambda_rate", self.lambda_rate),
            ("c_inout", self.c_inout),
            ("gamma_typ", self.gamma_typ),
            ("f_typ", self.f_typ),
            ("rho_max", self.rho_max),
            ("c_h", self.c_h),
            ("lambda_som_max", self.lambda_som_max),
            ("lambda_cone_max", self.lambda_cone_max),
            ("lambda_som_typ", self.lambda_som_typ),
            ("lambda_cone_typ", self.lambda_cone_typ),
            ("h_typ", self.h_typ),
            ("l_min", self.l_min),
            ("lambda_min", self.lambda_min),
            ("vesicle_diameter", self.vesicle_diameter),
            ("neurite_diameter", self.neurite_diameter),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("scale must be finite and > 0, got {v}")));
            }
        }
        // Both directions at typical density fill half the neurite.
        let mismatch = (4.0 * self.f_typ - self.rho_max).abs() / self.rho_max;
        if mismatch > 0.01 {
            return Err(invalid(
                "f_typ",
                format!(
                    "two typical densities should fill half the neurite (4 f_typ = {} vs rho_max = {})",
                    4.0 * self.f_typ,
                    self.rho_max
                ),
            ));
        }
        Ok(())
    }

    /// Scaled constants for these typical values.
    pub fn nondimensionalize(&self) -> Result<DimensionlessParams> {
        self.validate()?;
        let geometric = self.t_typ / self.l_typ;
        let kappa_inout = geometric * self.c_inout;
        let neurite_vesicles = self.f_typ * self.l_typ;
        let exchange = self.c_inout * self.f_typ * self.t_typ;
        let (kappa_som, kappa_cone) = (
            exchange / self.lambda_som_typ,
            exchange / self.lambda_cone_typ,
        );
        let kappa_l = geometric * self.h_typ;
        Ok(DimensionlessParams {
            kappa_v: self.v0 * geometric,
            kappa_d: self.d_t * self.t_typ / (self.l_typ * self.l_typ),
            kappa_lambda: self.t_typ * self.lambda_rate,
            kappa_alpha_plus: [kappa_inout; NEURITES],
            kappa_alpha_minus: [kappa_inout; NEURITES],
            kappa_beta_plus: [kappa_inout; NEURITES],
            kappa_beta_minus: [kappa_inout; NEURITES],
            kappa_som,
            kappa_cone,
            kappa_gamma: self.gamma_typ * self.t_typ / self.lambda_som_typ,
            kappa_l,
            c_growth: [self.c_h * self.l_typ / self.lambda_cone_typ; NEURITES],
            rho_cap: 2.0,
            lambda_som_cap: self.lambda_som_max / self.lambda_som_typ,
            lambda_cone_cap: self.lambda_cone_max / self.lambda_cone_typ,
            ell_min: [self.l_min / self.l_typ; NEURITES],
            lambda_min: self.lambda_min / self.lambda_cone_typ,
            // Pool equations multiply raw flux values, so one pool unit holds
            // `neurite_vesicles / kappa` vesicles for the ledger to close.
            mass_units: MassUnits {
                density: neurite_vesicles,
                soma: neurite_vesicles / kappa_som,
                cone: neurite_vesicles / kappa_cone,
            },
            eta: 10.0,
        })
    }

    /// `(t/Lambda_cone) h c_h`.
    pub fn kappa_h(&self) -> f64 {
        self.t_typ / self.lambda_cone_typ * self.h_typ * self.c_h
    }

    /// Recovers the physical rates from scaled constants using the typical
    /// length, time and pool sizes of `self`.
    pub fn redimensionalize(&self, p: &DimensionlessParams) -> PhysicalRates {
        let geometric = self.t_typ / self.l_typ;
        PhysicalRates {
            v0: p.kappa_v / geometric,
            d_t: p.kappa_d * self.l_typ * self.l_typ / self.t_typ,
            lambda_rate: p.kappa_lambda / self.t_typ,
            c_inout: p.kappa_alpha_plus[0] / geometric,
            gamma_typ: p.kappa_gamma * self.lambda_som_typ / self.t_typ,
            h_typ: p.kappa_l / geometric,
            c_h: p.c_growth[0] * self.lambda_cone_typ / self.l_typ,
            f_typ: p.kappa_cone * self.lambda_cone_typ * geometric
                / (p.kappa_alpha_plus[0] * self.t_typ),
        }
    }
}

/// Physical rates recovered from scaled constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalRates {
    pub v0: f64,
    pub d_t: f64,
    pub lambda_rate: f64,
    pub c_inout: f64,
    pub gamma_typ: f64,
    pub h_typ: f64,
    pub c_h: f64,
    pub f_typ: f64,
}

/// Result of the packing estimate of the maximal density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxDensity {
    /// Vesicles per cross-section slice.
    pub n_max: u64,
    /// Fully packed density before the safety divisor (vesicles/μm).
    pub packed: f64,
    /// `packed / safety_divisor`.
    pub exact: f64,
    /// `exact` rounded up to the next multiple of 5 vesicles/μm, the
    /// convention behind the published 155.
    pub reported: f64,
}

/// Maximal density from hexagonal packing of vesicle cross-sections.
pub fn max_density(
    vesicle_diameter: f64,
    neurite_diameter: f64,
    packing_fraction: f64,
    slices_per_micron: f64,
    safety_divisor: f64,
) -> MaxDensity {
    let ratio = neurite_diameter / vesicle_diameter;
    // Guard against 0.99999.. from the division when the ratio is integral.
    let n_max = (ratio * ratio / packing_fraction + 1e-9).floor() as u64;
    let packed = n_max as f64 * slices_per_micron;
    let exact = packed / safety_divisor;
    MaxDensity {
        n_max,
        packed,
        exact,
        reported: (exact / 5.0 - 1e-9).ceil() * 5.0,
    }
}

/// Vesicles needed per μm of growth: membrane area of a 1 μm cylinder
/// segment over the surface area of one vesicle. Diameters in nm.
pub fn vesicles_per_micron_growth(vesicle_diameter: f64, neurite_diameter: f64) -> f64 {
    let neurite_um = neurite_diameter * 1e-3;
    let vesicle_um = vesicle_diameter * 1e-3;
    let segment = std::f64::consts::PI * neurite_um * 1.0;
    let vesicle = std::f64::consts::PI * vesicle_um * vesicle_um;
    segment / vesicle
}
