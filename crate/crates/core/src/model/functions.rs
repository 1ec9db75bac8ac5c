//! Closed-form coupling functions between neurites, pools and lengths.
//!
//! Each family is a small enum of named shapes rather than arbitrary code so
//! that presets are reproducible, serializable and can be differentiated in
//! closed form by the implicit pool and length updates.

use serde::{Deserialize, Serialize};

use super::params::NEURITES;

/// Transport direction of a vesicle population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Towards the growth cone (`f_plus`).
    Antero,
    /// Towards the soma (`f_minus`).
    Retro,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Antero => 1.0,
            Direction::Retro => -1.0,
        }
    }
}

/// Exchange rate as a function of a pool level (the `alpha` and `beta` maps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RateLaw {
    Zero,
    Constant { value: f64 },
    /// `coef * s / cap`
    Rising { coef: f64, cap: f64 },
    /// `coef * (1 - s / cap)`
    Falling { coef: f64, cap: f64 },
    /// `coef * (1 - s / cap) * s / cap`
    Hump { coef: f64, cap: f64 },
}

impl RateLaw {
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            RateLaw::Zero => 0.0,
            RateLaw::Constant { value } => value,
            RateLaw::Rising { coef, cap } => coef * s / cap,
            RateLaw::Falling { coef, cap } => coef * (1.0 - s / cap),
            RateLaw::Hump { coef, cap } => coef * (1.0 - s / cap) * (s / cap),
        }
    }

    #[inline]
    pub fn derivative(&self, s: f64) -> f64 {
        match *self {
            RateLaw::Zero | RateLaw::Constant { .. } => 0.0,
            RateLaw::Rising { coef, cap } => coef / cap,
            RateLaw::Falling { coef, cap } => -coef / cap,
            RateLaw::Hump { coef, cap } => coef * (1.0 - 2.0 * s / cap) / cap,
        }
    }

    /// `(intercept, slope)` when the law is affine in its argument.
    pub fn affine(&self) -> Option<(f64, f64)> {
        match *self {
            RateLaw::Zero => Some((0.0, 0.0)),
            RateLaw::Constant { value } => Some((value, 0.0)),
            RateLaw::Rising { coef, cap } => Some((0.0, coef / cap)),
            RateLaw::Falling { coef, cap } => Some((coef, -coef / cap)),
            RateLaw::Hump { .. } => None,
        }
    }

    /// Same shape with the leading coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> RateLaw {
        match *self {
            RateLaw::Zero => RateLaw::Zero,
            RateLaw::Constant { value } => RateLaw::Constant {
                value: value * factor,
            },
            RateLaw::Rising { coef, cap } => RateLaw::Rising {
                coef: coef * factor,
                cap,
            },
            RateLaw::Falling { coef, cap } => RateLaw::Falling {
                coef: coef * factor,
                cap,
            },
            RateLaw::Hump { coef, cap } => RateLaw::Hump {
                coef: coef * factor,
                cap,
            },
        }
    }
}

/// Space-availability factor `g(f_plus, f_minus)` applied to boundary inflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EntryGate {
    Zero,
    /// `f_dir * (1 - rho / cap)`, where `f_dir` is the population of the
    /// given direction.
    Own { direction: Direction, cap: f64 },
    /// `1 - rho / cap`
    Vacancy { cap: f64 },
    /// `(sqrt(max(0, 1 - slope * f_minus)^2 + floor) + shift) * (1 - rho / cap)`
    RetroSensing {
        cap: f64,
        slope: f64,
        floor: f64,
        shift: f64,
    },
}

impl EntryGate {
    #[inline]
    pub fn eval(&self, f_plus: f64, f_minus: f64) -> f64 {
        let rho = f_plus + f_minus;
        match *self {
            EntryGate::Zero => 0.0,
            EntryGate::Own { direction, cap } => {
                let own = match direction {
                    Direction::Antero => f_plus,
                    Direction::Retro => f_minus,
                };
                own * (1.0 - rho / cap)
            }
            EntryGate::Vacancy { cap } => 1.0 - rho / cap,
            EntryGate::RetroSensing {
                cap,
                slope,
                floor,
                shift,
            } => {
                let clipped = (1.0 - slope * f_minus).max(0.0);
                ((clipped * clipped + floor).sqrt() + shift) * (1.0 - rho / cap)
            }
        }
    }
}

/// Growth law `h(Lambda, L)` of a neurite tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrowthLaw {
    Zero,
    Constant { value: f64 },
    /// `atan(Lambda - lambda_min) / (1 + exp(-steepness * (L - ell_min - offset)))`
    ArctanLogistic {
        lambda_min: f64,
        ell_min: f64,
        steepness: f64,
        offset: f64,
    },
    /// `lambda_slope * (Lambda - lambda_ref) + length_slope * (L - length_ref)`
    Linear {
        lambda_slope: f64,
        length_slope: f64,
        lambda_ref: f64,
        length_ref: f64,
    },
}

impl GrowthLaw {
    #[inline]
    pub fn eval(&self, lambda: f64, length: f64) -> f64 {
        match *self {
            GrowthLaw::Zero => 0.0,
            GrowthLaw::Constant { value } => value,
            GrowthLaw::ArctanLogistic {
                lambda_min,
                ell_min,
                steepness,
                offset,
            } => {
                let gate = 1.0 / (1.0 + (-steepness * (length - ell_min - offset)).exp());
                (lambda - lambda_min).atan() * gate
            }
            GrowthLaw::Linear {
                lambda_slope,
                length_slope,
                lambda_ref,
                length_ref,
            } => lambda_slope * (lambda - lambda_ref) + length_slope * (length - length_ref),
        }
    }

    #[inline]
    pub fn d_length(&self, lambda: f64, length: f64) -> f64 {
        match *self {
            GrowthLaw::Zero | GrowthLaw::Constant { .. } => 0.0,
            GrowthLaw::ArctanLogistic {
                lambda_min,
                ell_min,
                steepness,
                offset,
            } => {
                let e = (-steepness * (length - ell_min - offset)).exp();
                let gate_prime = steepness * e / ((1.0 + e) * (1.0 + e));
                (lambda - lambda_min).atan() * gate_prime
            }
            GrowthLaw::Linear { length_slope, .. } => length_slope,
        }
    }

    #[inline]
    pub fn d_lambda(&self, lambda: f64, length: f64) -> f64 {
        match *self {
            GrowthLaw::Zero | GrowthLaw::Constant { .. } => 0.0,
            GrowthLaw::ArctanLogistic {
                lambda_min,
                ell_min,
                steepness,
                offset,
            } => {
                let gate = 1.0 / (1.0 + (-steepness * (length - ell_min - offset)).exp());
                let x = lambda - lambda_min;
                gate / (1.0 + x * x)
            }
            GrowthLaw::Linear { lambda_slope, .. } => lambda_slope,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GrowthLaw::Zero)
    }
}

/// Vesicle production in the soma, `gamma(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Production {
    Zero,
    Constant { value: f64 },
    /// `amplitude * exp(-rate * t)`
    Decaying { amplitude: f64, rate: f64 },
}

impl Production {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Production::Zero => 0.0,
            Production::Constant { value } => value,
            Production::Decaying { amplitude, rate } => amplitude * (-rate * t).exp(),
        }
    }

    /// Exact integral over `[0, t]`.
    pub fn integral(&self, t: f64) -> f64 {
        match *self {
            Production::Zero => 0.0,
            Production::Constant { value } => value * t,
            Production::Decaying { amplitude, rate } => {
                if rate == 0.0 {
                    amplitude * t
                } else {
                    amplitude * (1.0 - (-rate * t).exp()) / rate
                }
            }
        }
    }
}

/// The full set of coupling functions of the model, one entry per neurite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFunctions {
    pub alpha_plus: [RateLaw; NEURITES],
    pub alpha_minus: [RateLaw; NEURITES],
    pub beta_plus: [RateLaw; NEURITES],
    pub beta_minus: [RateLaw; NEURITES],
    pub g_plus: [EntryGate; NEURITES],
    pub g_minus: [EntryGate; NEURITES],
    pub h: [GrowthLaw; NEURITES],
    pub gamma: Production,
}

impl ModelFunctions {
    /// No exchange, no growth, no production.
    pub fn closed() -> Self {
        ModelFunctions {
            alpha_plus: [RateLaw::Zero; NEURITES],
            alpha_minus: [RateLaw::Zero; NEURITES],
            beta_plus: [RateLaw::Zero; NEURITES],
            beta_minus: [RateLaw::Zero; NEURITES],
            g_plus: [EntryGate::Zero; NEURITES],
            g_minus: [EntryGate::Zero; NEURITES],
            h: [GrowthLaw::Zero; NEURITES],
            gamma: Production::Zero,
        }
    }
}
