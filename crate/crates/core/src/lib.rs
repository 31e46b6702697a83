//! Radial eigenfunctions of the hyperbolic Laplacian on the Poincaré ball.
//!
//! Every radial eigenfunction normalized to one at the origin is a sphere
//! average of a power of the Schwarz chord-ratio kernel
//! `ω(m, u) = (ρ² − |m|²)/|m − u|²`. This crate evaluates those averages by
//! adaptive quadrature, cross-checks them against a direct integration of
//! the radial ODE, and inverts the map `λ ↦ φ_λ(r)`: one observation
//! identifies the eigenvalue when it lies above the separator `V(r)`,
//! otherwise one extra observation near the origin does.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod eigenfn;
mod error;
pub mod geometry;
pub mod inversion;
pub mod oracle;
pub mod quadrature;
pub mod radialize;

pub use eigenfn::{Branch, SpectralParam};
pub use error::{Error, Result};
pub use geometry::{ChordGeometry, EuclideanRadius, HyperbolicSpace};
pub use inversion::{Classification, Observation, RecoveryResult};
pub use oracle::{Limit, SampleTable, StepControl};
pub use quadrature::QuadratureConfig;
pub use radialize::{BallPoint, SphereAverage};
