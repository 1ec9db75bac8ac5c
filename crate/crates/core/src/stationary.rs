//! Spatially constant stationary states.
//!
//! Everything here works in the unscaled convention where the neurite is
//! full at `rho = 1` and the pools at their maxima. [`ConstantStationaryState::to_scaled`]
//! converts to the cap-2 convention used by the integrator: densities and
//! pool levels double relative to their caps, and the exchange rates keep
//! their coefficients.
//!
//! With `f_plus = f_minus = f` the transport flux is `v0 f (1 - 2 f)`, and
//! the four linear exchange laws
//!
//! ```text
//! alpha_plus(s)  = c_ap s / S_max      beta_minus(s) = c_bm (1 - s / S_max)
//! alpha_minus(s) = c_am s / C_max      beta_plus(s)  = c_bp (1 - s / C_max)
//! ```
//!
//! balance it for `c_ap = v0 S_max / S`, `c_am = v0 C_max / C` and
//! `c_b = v0 (1 - rho) max / (max - level)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fv::{assemble_diffusion, explicit_residual, Grid1D};
use crate::model::{
    length_rhs, pool_rhs, state_boundary_fluxes, BoundaryFluxes, DimensionlessParams, Direction,
    EntryGate, GrowthLaw, MassUnits, ModelFunctions, NeuriteField, Production, RateLaw, SimState,
    NEURITES,
};

const ROOT_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 60;

/// Pool capacities in the unscaled convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolCaps {
    pub soma: f64,
    pub cone: f64,
}

/// Exchange coefficients of one neurite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeCoefficients {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantStationaryState {
    /// Common value of both populations, in `(0, 1/2]`.
    pub f_inf: [f64; NEURITES],
    pub lambda_inf: [f64; NEURITES],
    pub lambda_som_inf: f64,
    /// Unit lengths until [`ConstantStationaryState::settle_lengths`] places
    /// them at the zero of the growth law.
    pub lengths: [f64; NEURITES],
    pub caps: PoolCaps,
    pub v0: f64,
    pub coefficients: [ExchangeCoefficients; NEURITES],
}

/// Exchange coefficients that make the constant densities `f_inf` stationary
/// at the given pool levels.
pub fn solve_constant_state(
    f_inf: [f64; NEURITES],
    lambda_inf: [f64; NEURITES],
    lambda_som_inf: f64,
    caps: PoolCaps,
    v0: f64,
) -> Result<ConstantStationaryState> {
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(invalid("v0", format!("must be > 0, got {v0}")));
    }
    for (name, cap) in [("caps.soma", caps.soma), ("caps.cone", caps.cone)] {
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(invalid(name, format!("must be > 0, got {cap}")));
        }
    }
    if !(lambda_som_inf > 0.0 && lambda_som_inf < caps.soma) {
        return Err(invalid(
            "lambda_som_inf",
            format!("must lie in (0, {}), got {lambda_som_inf}", caps.soma),
        ));
    }
    for j in 0..NEURITES {
        if !(f_inf[j] > 0.0 && f_inf[j] <= 0.5) {
            return Err(invalid("f_inf", format!("entries must lie in (0, 1/2], got {}", f_inf[j])));
        }
        if !(lambda_inf[j] > 0.0 && lambda_inf[j] < caps.cone) {
            return Err(invalid(
                "lambda_inf",
                format!("entries must lie in (0, {}), got {}", caps.cone, lambda_inf[j]),
            ));
        }
    }
    let coefficients = std::array::from_fn(|j| {
        let vacancy = 1.0 - 2.0 * f_inf[j];
        ExchangeCoefficients {
            alpha_plus: v0 * caps.soma / lambda_som_inf,
            beta_minus: v0 * vacancy * caps.soma / (caps.soma - lambda_som_inf),
            alpha_minus: v0 * caps.cone / lambda_inf[j],
            beta_plus: v0 * vacancy * caps.cone / (caps.cone - lambda_inf[j]),
        }
    });
    Ok(ConstantStationaryState {
        f_inf,
        lambda_inf,
        lambda_som_inf,
        lengths: [1.0; NEURITES],
        caps,
        v0,
        coefficients,
    })
}

impl ConstantStationaryState {
    pub fn rho_inf(&self, j: usize) -> f64 {
        2.0 * self.f_inf[j]
    }

    /// Stationary through-flux `v0 f (1 - rho)` of neurite `j`.
    pub fn flux(&self, j: usize) -> f64 {
        self.v0 * self.f_inf[j] * (1.0 - self.rho_inf(j))
    }

    /// Exchange laws in the unscaled convention.
    pub fn rate_laws(&self, j: usize) -> [RateLaw; 4] {
        let c = &self.coefficients[j];
        [
            RateLaw::Rising { coef: c.alpha_plus, cap: self.caps.soma },
            RateLaw::Rising { coef: c.alpha_minus, cap: self.caps.cone },
            RateLaw::Falling { coef: c.beta_plus, cap: self.caps.cone },
            RateLaw::Falling { coef: c.beta_minus, cap: self.caps.soma },
        ]
    }

    /// Both compatibility relations, `alpha_minus (1 - rho) = beta_plus` at
    /// the cone and `alpha_plus (1 - rho) = beta_minus` at the soma, as
    /// relative errors.
    pub fn compatibility_errors(&self, j: usize) -> (f64, f64) {
        let [ap, am, bp, bm] = self.rate_laws(j);
        let vac = 1.0 - self.rho_inf(j);
        let rel = |a: f64, b: f64| {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        };
        (
            rel(am.eval(self.lambda_inf[j]) * vac, bp.eval(self.lambda_inf[j])),
            rel(ap.eval(self.lambda_som_inf) * vac, bm.eval(self.lambda_som_inf)),
        )
    }

    /// Places each length at the zero of its growth law, evaluated at the
    /// scaled cone level `2 Lambda / C_max`.
    pub fn settle_lengths(mut self, growth: &[GrowthLaw; NEURITES], ell_min: [f64; NEURITES]) -> Result<Self> {
        for j in 0..NEURITES {
            let level = self.scaled_cone(j);
            self.lengths[j] = growth_root(&growth[j], level, ell_min[j])?;
        }
        Ok(self)
    }

    fn scaled_cone(&self, j: usize) -> f64 {
        2.0 * self.lambda_inf[j] / self.caps.cone
    }

    fn scaled_soma(&self) -> f64 {
        2.0 * self.lambda_som_inf / self.caps.soma
    }

    /// Scaled model whose initial data is this state.
    pub fn to_scaled(&self, growth: &[GrowthLaw; NEURITES], opts: &ScaledOptions) -> ScaledStationary {
        let cap = 2.0;
        let functions = ModelFunctions {
            alpha_plus: std::array::from_fn(|j| RateLaw::Rising {
                coef: self.coefficients[j].alpha_plus,
                cap,
            }),
            alpha_minus: std::array::from_fn(|j| RateLaw::Rising {
                coef: self.coefficients[j].alpha_minus,
                cap,
            }),
            beta_plus: std::array::from_fn(|j| RateLaw::Falling {
                coef: self.coefficients[j].beta_plus,
                cap,
            }),
            beta_minus: std::array::from_fn(|j| RateLaw::Falling {
                coef: self.coefficients[j].beta_minus,
                cap,
            }),
            g_plus: [EntryGate::Own { direction: Direction::Antero, cap }; NEURITES],
            g_minus: [EntryGate::Own { direction: Direction::Retro, cap }; NEURITES],
            h: *growth,
            gamma: Production::Zero,
        };
        let params = DimensionlessParams {
            kappa_v: self.v0,
            kappa_d: opts.kappa_d,
            kappa_lambda: opts.kappa_lambda,
            kappa_alpha_plus: self.coefficients.map(|c| c.alpha_plus),
            kappa_alpha_minus: self.coefficients.map(|c| c.alpha_minus),
            kappa_beta_plus: self.coefficients.map(|c| c.beta_plus),
            kappa_beta_minus: self.coefficients.map(|c| c.beta_minus),
            // Lambda_bar = 2 Lambda / max and f_bar = 2 f, so one unscaled
            // vesicle of flux moves a pool by 1 / max.
            kappa_som: 1.0 / self.caps.soma,
            kappa_cone: 1.0 / self.caps.cone,
            kappa_gamma: 0.0,
            kappa_l: opts.kappa_l,
            c_growth: [opts.c_growth; NEURITES],
            rho_cap: cap,
            lambda_som_cap: cap,
            lambda_cone_cap: cap,
            ell_min: opts.ell_min,
            lambda_min: 1.0,
            mass_units: MassUnits {
                density: 0.5,
                soma: 0.5 * self.caps.soma,
                cone: 0.5 * self.caps.cone,
            },
            eta: 10.0,
        };
        let state = SimState {
            fields: std::array::from_fn(|j| {
                let f = 2.0 * self.f_inf[j];
                NeuriteField::uniform(opts.n_cells, f, f)
            }),
            lambda_som: self.scaled_soma(),
            lambda: std::array::from_fn(|j| self.scaled_cone(j)),
            lengths: self.lengths,
            length_rates: [0.0; NEURITES],
            time: 0.0,
        };
        ScaledStationary {
            functions,
            params,
            state,
        }
    }
}

/// Settings of the scaled model that do not affect stationarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScaledOptions {
    pub n_cells: usize,
    pub kappa_d: f64,
    pub kappa_lambda: f64,
    pub kappa_l: f64,
    pub c_growth: f64,
    pub ell_min: [f64; NEURITES],
}

impl Default for ScaledOptions {
    fn default() -> Self {
        ScaledOptions {
            n_cells: 101,
            kappa_d: 0.004,
            kappa_lambda: 1.0,
            kappa_l: 0.02,
            c_growth: 1.0,
            ell_min: [0.1; NEURITES],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledStationary {
    pub functions: ModelFunctions,
    pub params: DimensionlessParams,
    pub state: SimState,
}

impl ScaledStationary {
    /// Model-core boundary fluxes converted back to the unscaled convention.
    pub fn unscaled_boundary_fluxes(&self) -> [BoundaryFluxes; NEURITES] {
        state_boundary_fluxes(&self.state, &self.functions).map(|b| BoundaryFluxes {
            inflow_left: 0.5 * b.inflow_left,
            outflow_left: 0.5 * b.outflow_left,
            outflow_right: 0.5 * b.outflow_right,
            inflow_right: 0.5 * b.inflow_right,
        })
    }
}

/// Zero of `L -> h(level, L)` on `[ell_min, inf)` by bisection, doubling the
/// upper end until the sign changes. `h` must increase in `L`.
pub fn growth_root(h: &GrowthLaw, level: f64, ell_min: f64) -> Result<f64> {
    let at = |len: f64| h.eval(level, len);
    let lo_val = at(ell_min);
    if lo_val == 0.0 {
        return Ok(ell_min);
    }
    if lo_val > 0.0 {
        return Err(Error::Infeasible(format!(
            "growth law is positive at the minimal length {ell_min} for cone level {level}"
        )));
    }
    let (mut lo, mut hi) = (ell_min, 2.0 * ell_min.max(0.5));
    let mut doublings = 0;
    while at(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::Infeasible(format!(
                "growth law stays negative above {ell_min} for cone level {level}"
            )));
        }
    }
    while hi - lo > ROOT_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let v = at(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest absolute entry of the full discrete right-hand side (densities,
/// pools and lengths) at `state`, with no length motion.
pub fn stationary_residual(
    state: &SimState,
    mf: &ModelFunctions,
    p: &DimensionlessParams,
) -> Result<f64> {
    let grid = Grid1D::new(state.n_cells())?;
    let diffusion = assemble_diffusion(&grid)?;
    let mut worst: f64 = 0.0;
    for j in 0..NEURITES {
        let field = &state.fields[j];
        let len = state.lengths[j];
        let r = explicit_residual(field, len, 0.0, state.lambda_som, state.lambda[j], mf, j, p, &grid);
        let scale = p.kappa_d / (len * len * grid.h());
        for (values, rates) in [(&field.f_plus, &r.plus), (&field.f_minus, &r.minus)] {
            let diff = diffusion.apply(values);
            for (rate, d) in rates.iter().zip(diff) {
                worst = worst.max((rate - scale * d).abs());
            }
        }
    }
    let fluxes = state_boundary_fluxes(state, mf);
    let pools = pool_rhs(state, &fluxes, mf, p, state.time);
    worst = worst.max(pools.soma.abs());
    for j in 0..NEURITES {
        worst = worst.max(pools.cone[j].abs());
        worst = worst.max(length_rhs(state.lambda[j], state.lengths[j], &mf.h[j], p).abs());
    }
    Ok(worst)
}

/// `sum_j (L_j rho_j + Lambda_j) + Lambda_som` in the unscaled convention.
pub fn mass_of_state(state: &ConstantStationaryState) -> f64 {
    (0..NEURITES)
        .map(|j| state.lengths[j] * state.rho_inf(j) + state.lambda_inf[j])
        .sum::<f64>()
        + state.lambda_som_inf
}
