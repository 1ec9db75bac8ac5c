//! Finite volume semi-discretization on the frozen reference interval.

mod grid;
mod residual;
mod tridiag;

pub use grid::Grid1D;
pub use residual::{
    convective_residual, convective_residual_into, explicit_residual,
    lax_friedrichs_face_flux, reaction_geometric_residual, reaction_geometric_residual_into,
    Residual,
};
pub use tridiag::{assemble_diffusion, TridiagonalOperator};
