//! Simulation of neurite growth driven by vesicle transport.
//!
//! Each neurite carries antero- and retrograde vesicle densities obeying
//! drift–diffusion–reaction equations with size exclusion on a moving
//! interval `(0, L_j(t))`. The neurites exchange vesicles with a soma pool
//! and a growth-cone pool at their ends, and each length follows the
//! vesicle level of its cone.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: state, coupling functions, fluxes and right-hand sides.
//! * [`fv`]: finite volume discretization on the frozen interval `(0, 1)`.
//! * [`integrator`]: the implicit–explicit step and the run loop.
//! * [`scaling`]: physical typical values and scaled constants.
//! * [`stationary`]: spatially constant equilibria.
//! * [`validation`]: mass ledger, box monitors, hypothesis checks and
//!   refinement studies.
//! * [`experiment`]: configuration files, presets and on-disk artifacts.

pub mod error;
pub mod experiment;
pub mod fv;
pub mod integrator;
pub mod model;
pub mod scaling;
pub mod stationary;
pub mod validation;

pub use error::{Error, Result};
