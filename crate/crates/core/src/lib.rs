//! Numerical laboratory for the periodic axisymmetric averaged mean curvature flow.
//!
//! A surface of revolution about the x-axis is described by a positive
//! 2π-periodic profile `r(x)`. The flow `r_t = G(r)` moves the surface with
//! normal velocity equal to the gap between the area-averaged mean curvature
//! and the local mean curvature, which keeps the enclosed volume fixed and
//! decreases the area.
//!
//! The crate is organised bottom-up:
//!
//! * [`torus`]: uniform periodic grids, spectral transforms and projections.
//! * [`geometry`]: curvatures, area, volume, the flow operator and its linearization.
//! * [`reduction`]: the zero-mean / equivolume reduction and the lifting map.
//! * [`evolution`]: time integration with conservation diagnostics.
//! * [`equilibria`]: cylinders and Kenmotsu-parametrized unduloids.
//! * [`stability`]: closed-form and numeric spectra at equilibria.
//! * [`bifurcation`]: branches of unduloids bifurcating from cylinders.
//! * [`verify`]: the acceptance criteria, shared by the test suite and the CLI.

pub mod bifurcation;
pub mod cli;
pub mod equilibria;
mod error;
pub mod evolution;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod reduction;
pub mod stability;
pub mod torus;
pub mod verify;

pub use error::{AmcfError, Result};
pub use torus::{ProfileFunction, ZeroMeanFunction};

/// Tool version stamped into every emitted file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
