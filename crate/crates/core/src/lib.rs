//! Boundary behaviour of inner functions on the unit disk.
//!
//! The crate evaluates finite Blaschke products times singular inner
//! functions (atomic and piecewise-uniform dyadic measures), and computes
//! the hyperbolic derivative, Möbius distortion, accumulated distortion
//! along radii and Stolz angles, angular derivatives, and boundary profiles
//! with their `L^p` norms. The [`measures`] module carries the dyadic side:
//! Carleson boxes, a heavy-light stopping-time decomposition in exact
//! rational arithmetic, Beurling–Carleson set tests and the sublevel-set
//! integral of a singular inner function.
//!
//! Angles are measured in turns, so the normalized Lebesgue measure of an
//! arc is its angular length.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod config;
pub mod entropy;
mod error;
pub mod hypgeo;
pub mod innerfn;
pub mod math;
pub mod measures;
mod probe;
mod quad;

pub use config::QuadratureConfig;
pub use error::{Error, Result};
pub use hypgeo::DiskPoint;
pub use innerfn::InnerFunctionSpec;
pub use measures::SingularMeasure;
