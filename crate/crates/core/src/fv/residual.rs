use super::grid::Grid1D;
use crate::model::{
    boundary_fluxes, convective_velocity, BoundaryFluxes, DimensionlessParams, Direction,
    ModelFunctions, NeuriteField,
};

/// Lax–Friedrichs flux `<v f> - [f] / 2` at a face between a left and a
/// right cell.
#[inline]
pub fn lax_friedrichs_face_flux(v_l: f64, v_r: f64, f_l: f64, f_r: f64) -> f64 {
    0.5 * (v_l * f_l + v_r * f_r) - 0.5 * (f_r - f_l)
}

/// Per-cell time derivatives of the two populations of a neurite.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

impl Residual {
    pub fn zeros(n_cells: usize) -> Self {
        Residual {
            plus: vec![0.0; n_cells],
            minus: vec![0.0; n_cells],
        }
    }

    pub fn add(&mut self, other: &Residual) {
        for (a, b) in self.plus.iter_mut().zip(&other.plus) {
            *a += b;
        }
        for (a, b) in self.minus.iter_mut().zip(&other.minus) {
            *a += b;
        }
    }
}

/// Convective part of the semi-discrete equations, `(F_{k-1/2} - F_{k+1/2}) / (h L)`.
///
/// Interior faces use the Lax–Friedrichs flux with the exclusion factor
/// evaluated at the mean density of the two neighbours; the outermost faces
/// carry the boundary exchange terms.
pub fn convective_residual(
    field: &NeuriteField,
    length: f64,
    dldt: f64,
    bc: &BoundaryFluxes,
    p: &DimensionlessParams,
    grid: &Grid1D,
) -> Residual {
    let mut out = Residual::zeros(field.n_cells());
    convective_residual_into(field, length, dldt, bc, p, grid, &mut out);
    out
}

/// Allocation-free variant of [`convective_residual`]; overwrites `out`.
pub fn convective_residual_into(
    field: &NeuriteField,
    length: f64,
    dldt: f64,
    bc: &BoundaryFluxes,
    p: &DimensionlessParams,
    grid: &Grid1D,
    out: &mut Residual,
) {
    let n = field.n_cells();
    debug_assert_eq!(n, grid.n_cells());
    let inv_hl = 1.0 / (grid.h() * length);
    let faces = grid.faces();
    let (fp, fm) = (&field.f_plus, &field.f_minus);

    // Flux through the left face of cell k, carried forward.
    let mut left_plus = bc.inflow_left;
    let mut left_minus = -bc.outflow_left;
    for k in 0..n {
        let (right_plus, right_minus) = if k + 1 < n {
            let rho_face = 0.5 * (fp[k] + fm[k] + fp[k + 1] + fm[k + 1]);
            let y = faces[k + 1];
            let v_plus = convective_velocity(y, rho_face, dldt, Direction::Antero, p);
            let v_minus = convective_velocity(y, rho_face, dldt, Direction::Retro, p);
            (
                lax_friedrichs_face_flux(v_plus, v_plus, fp[k], fp[k + 1]),
                lax_friedrichs_face_flux(v_minus, v_minus, fm[k], fm[k + 1]),
            )
        } else {
            (bc.outflow_right, -bc.inflow_right)
        };
        out.plus[k] = (left_plus - right_plus) * inv_hl;
        out.minus[k] = (left_minus - right_minus) * inv_hl;
        left_plus = right_plus;
        left_minus = right_minus;
    }
}

/// Direction switching and dilution, `kappa_lambda (f_other - f) - (L'/L) f`.
pub fn reaction_geometric_residual(
    field: &NeuriteField,
    length: f64,
    dldt: f64,
    p: &DimensionlessParams,
) -> Residual {
    let mut out = Residual::zeros(field.n_cells());
    reaction_geometric_residual_into(field, length, dldt, p, &mut out);
    out
}

pub fn reaction_geometric_residual_into(
    field: &NeuriteField,
    length: f64,
    dldt: f64,
    p: &DimensionlessParams,
    out: &mut Residual,
) {
    let dilution = dldt / length;
    for k in 0..field.n_cells() {
        let (a, r) = (field.f_plus[k], field.f_minus[k]);
        out.plus[k] = p.kappa_lambda * (r - a) - dilution * a;
        out.minus[k] = p.kappa_lambda * (a - r) - dilution * r;
    }
}

/// Explicit (non-diffusive) part of the semi-discrete equations of neurite `j`.
#[allow(clippy::too_many_arguments)]
pub fn explicit_residual(
    field: &NeuriteField,
    length: f64,
    dldt: f64,
    lambda_som: f64,
    lambda_cone: f64,
    mf: &ModelFunctions,
    j: usize,
    p: &DimensionlessParams,
    grid: &Grid1D,
) -> Residual {
    let bc = boundary_fluxes(field, lambda_som, lambda_cone, mf, j);
    let mut out = convective_residual(field, length, dldt, &bc, p, grid);
    out.add(&reaction_geometric_residual(field, length, dldt, p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets::{self, Preset};

    fn params() -> DimensionlessParams {
        presets::setup(Preset::ExperimentOne).params
    }

    #[test]
    fn face_flux_examples() {
        assert_eq!(lax_friedrichs_face_flux(1.0, 1.0, 0.5, 0.5), 0.5);
        assert_eq!(lax_friedrichs_face_flux(0.7, -0.2, 0.0, 0.0), 0.0);
        assert_eq!(lax_friedrichs_face_flux(0.0, 0.0, 1.0, 0.0), 0.5);
    }

    #[test]
    fn vacuum_has_zero_residual() {
        let s = presets::setup(Preset::Section4Linear);
        let grid = Grid1D::new(10).unwrap();
        let field = NeuriteField::zeros(10);
        let r = explicit_residual(&field, 1.3, 0.02, 0.0, 0.8, &s.functions, 0, &s.params, &grid);
        assert!(r.plus.iter().chain(&r.minus).all(|v| *v == 0.0));
    }

    #[test]
    fn closed_box_telescopes() {
        let p = params();
        let grid = Grid1D::new(25).unwrap();
        let field = NeuriteField {
            f_plus: (0..25).map(|k| 0.3 + 0.2 * (k as f64 * 0.4).sin()).collect(),
            f_minus: (0..25).map(|k| 0.5 + 0.1 * (k as f64 * 0.9).cos()).collect(),
        };
        let length = 1.7;
        let r = convective_residual(&field, length, 0.05, &BoundaryFluxes::default(), &p, &grid);
        let total: f64 = r.plus.iter().chain(&r.minus).sum::<f64>() * grid.h() * length;
        assert!(total.abs() < 1e-14);
    }

    #[test]
    fn two_cell_transfer() {
        let mut p = params();
        p.kappa_v = 0.4;
        let grid = Grid1D::new(2).unwrap();
        let field = NeuriteField {
            f_plus: vec![1.0, 0.0],
            f_minus: vec![0.0, 0.0],
        };
        let length = 2.0;
        let r = convective_residual(&field, length, 0.0, &BoundaryFluxes::default(), &p, &grid);
        // Shared face: rho = 0.5, v = 0.4 * (1 - 0.25) = 0.3;
        // F = 0.5 * 0.3 * 1 - 0.5 * (0 - 1) = 0.65.
        let f = 0.65;
        let scale = 1.0 / (0.5 * length);
        assert!((r.plus[0] + f * scale).abs() < 1e-15);
        assert!((r.plus[1] - f * scale).abs() < 1e-15);
    }

    #[test]
    fn reaction_examples() {
        let mut p = params();
        p.kappa_lambda = 0.0;
        let field = NeuriteField::uniform(3, 1.0, 0.4);
        let r = reaction_geometric_residual(&field, 1.0, 0.0, &p);
        assert!(r.plus.iter().all(|v| *v == 0.0));
        let r = reaction_geometric_residual(&field, 2.0, 0.2, &p);
        assert!((r.plus[0] + 0.1).abs() < 1e-15);
        p.kappa_lambda = 3.0;
        let eq = NeuriteField::uniform(3, 0.4, 0.4);
        let r = reaction_geometric_residual(&eq, 1.0, 0.0, &p);
        assert!(r.plus.iter().chain(&r.minus).all(|v| *v == 0.0));
    }

    #[test]
    fn boundary_fluxes_enter_the_end_cells() {
        let p = params();
        let grid = Grid1D::new(4).unwrap();
        let field = NeuriteField::zeros(4);
        let bc = BoundaryFluxes {
            inflow_left: 0.2,
            outflow_left: 0.0,
            outflow_right: 0.0,
            inflow_right: 0.1,
        };
        let r = convective_residual(&field, 1.0, 0.0, &bc, &p, &grid);
        assert!((r.plus[0] - 0.8).abs() < 1e-15);
        assert!((r.minus[3] - 0.4).abs() < 1e-15);
        assert_eq!(r.plus[3], 0.0);
    }

    #[test]
    fn mirror_symmetry_between_directions() {
        // Mirror the state in y and swap populations; with no growth drift the
        // retrograde residual becomes the mirrored anterograde one.
        let p = params();
        let n = 12;
        let grid = Grid1D::new(n).unwrap();
        let fp: Vec<f64> = (0..n).map(|k| 0.2 + 0.05 * k as f64).collect();
        let fm: Vec<f64> = (0..n).map(|k| 0.6 - 0.03 * k as f64).collect();
        let field = NeuriteField { f_plus: fp.clone(), f_minus: fm.clone() };
        let bc = BoundaryFluxes {
            inflow_left: 0.03,
            outflow_left: 0.02,
            outflow_right: 0.05,
            inflow_right: 0.01,
        };
        let r = convective_residual(&field, 1.2, 0.0, &bc, &p, &grid);
        let mirrored = NeuriteField {
            f_plus: fm.iter().rev().copied().collect(),
            f_minus: fp.iter().rev().copied().collect(),
        };
        let mbc = BoundaryFluxes {
            inflow_left: bc.inflow_right,
            outflow_left: bc.outflow_right,
            outflow_right: bc.outflow_left,
            inflow_right: bc.inflow_left,
        };
        let rm = convective_residual(&mirrored, 1.2, 0.0, &mbc, &p, &grid);
        for k in 0..n {
            assert!((r.plus[k] - rm.minus[n - 1 - k]).abs() < 1e-13);
            assert!((r.minus[k] - rm.plus[n - 1 - k]).abs() < 1e-13);
        }
    }
}
