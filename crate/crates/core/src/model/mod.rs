//! Domain types, coupling functions and continuous right-hand sides.

mod functions;
mod params;
pub mod presets;
mod rhs;
mod state;

pub use functions::{Direction, EntryGate, GrowthLaw, ModelFunctions, Production, RateLaw};
pub use params::{DimensionlessParams, MassUnits, NEURITES};
pub use rhs::{
    boundary_fluxes, convective_velocity, length_rhs, pool_rhs, state_boundary_fluxes,
    BoundaryFluxes, PoolRates,
};
pub use state::{project_cells, InitialData, NeuriteField, Profile, SimState};
