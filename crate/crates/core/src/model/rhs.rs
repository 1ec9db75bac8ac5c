use super::functions::{Direction, GrowthLaw, ModelFunctions};
use super::params::{DimensionlessParams, NEURITES};
use super::state::{NeuriteField, SimState};

/// Drift velocity at reference coordinate `y` in the frozen frame.
///
/// The exclusion factor `(1 - rho / rho_cap)` scales the motor speed and the
/// geometric drift `-dldt * y` is shared by both directions. The `1 / L`
/// factor is applied by the flux assembly.
#[inline]
pub fn convective_velocity(
    y: f64,
    rho_face: f64,
    dldt: f64,
    direction: Direction,
    p: &DimensionlessParams,
) -> f64 {
    direction.sign() * p.kappa_v * (1.0 - rho_face / p.rho_cap) - dldt * y
}

/// The four boundary exchange terms of one neurite, all oriented as
/// nonnegative magnitudes under the structural hypotheses.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryFluxes {
    /// Anterograde entry from the soma, `alpha_plus(L_som) * g_plus(f(0))`.
    pub inflow_left: f64,
    /// Retrograde exit into the soma, `beta_minus(L_som) * f_minus(0)`.
    pub outflow_left: f64,
    /// Anterograde exit into the cone, `beta_plus(L_j) * f_plus(1)`.
    pub outflow_right: f64,
    /// Retrograde entry from the cone, `alpha_minus(L_j) * g_minus(f(1))`.
    pub inflow_right: f64,
}

impl BoundaryFluxes {
    /// Net mass gained by the neurite per unit time.
    pub fn net_into_neurite(&self) -> f64 {
        self.inflow_left - self.outflow_left + self.inflow_right - self.outflow_right
    }

    /// Names of the entries that came out negative.
    pub fn negative_entries(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, v) in [
            ("inflow_left", self.inflow_left),
            ("outflow_left", self.outflow_left),
            ("outflow_right", self.outflow_right),
            ("inflow_right", self.inflow_right),
        ] {
            if v < 0.0 {
                out.push(name);
            }
        }
        out
    }
}

/// Evaluates the boundary conditions of neurite `j` from its boundary cells.
pub fn boundary_fluxes(
    field: &NeuriteField,
    lambda_som: f64,
    lambda_cone: f64,
    mf: &ModelFunctions,
    j: usize,
) -> BoundaryFluxes {
    let (fp0, fm0) = field.soma_trace();
    let (fp1, fm1) = field.tip_trace();
    BoundaryFluxes {
        inflow_left: mf.alpha_plus[j].eval(lambda_som) * mf.g_plus[j].eval(fp0, fm0),
        outflow_left: mf.beta_minus[j].eval(lambda_som) * fm0,
        outflow_right: mf.beta_plus[j].eval(lambda_cone) * fp1,
        inflow_right: mf.alpha_minus[j].eval(lambda_cone) * mf.g_minus[j].eval(fp1, fm1),
    }
}

/// Boundary fluxes of both neurites for a state.
pub fn state_boundary_fluxes(state: &SimState, mf: &ModelFunctions) -> [BoundaryFluxes; NEURITES] {
    std::array::from_fn(|j| {
        boundary_fluxes(&state.fields[j], state.lambda_som, state.lambda[j], mf, j)
    })
}

/// Time derivatives of the soma and cone pools.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolRates {
    pub soma: f64,
    pub cone: [f64; NEURITES],
}

pub fn pool_rhs(
    state: &SimState,
    fluxes: &[BoundaryFluxes; NEURITES],
    mf: &ModelFunctions,
    p: &DimensionlessParams,
    t: f64,
) -> PoolRates {
    let exchange: f64 = fluxes
        .iter()
        .map(|b| b.outflow_left - b.inflow_left)
        .sum();
    let soma = p.kappa_som * exchange + p.kappa_gamma * mf.gamma.eval(t);
    let cone = std::array::from_fn(|j| {
        let b = &fluxes[j];
        p.kappa_cone * (b.outflow_right - b.inflow_right)
            - p.kappa_h(j) * mf.h[j].eval(state.lambda[j], state.lengths[j])
    });
    PoolRates { soma, cone }
}

/// `dL/dt = kappa_L * h(Lambda, L)`.
#[inline]
pub fn length_rhs(lambda: f64, length: f64, h: &GrowthLaw, p: &DimensionlessParams) -> f64 {
    p.kappa_l * h.eval(lambda, length)
}
