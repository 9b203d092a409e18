//! Numerical laboratory for conformal minimal immersions `X = (h, f)` in the
//! product spaces `M x R`, where `M` is the Euclidean plane, the hyperbolic
//! plane (unit-disk model) or the round sphere (stereographic chart).
//!
//! The horizontal part `h` of a conformal minimal immersion is a harmonic map
//! into `(M, sigma^2 |dz|^2)`; its holomorphic Hopf differential
//! `Q = phi dw^2`, together with the log-dilatation `omega` and the phase
//! `psi` of the Gauss data `g = -i e^{omega + i psi}`, encode the immersion
//! completely.  This crate samples such data on rectangular grids, rebuilds
//! immersions from it, constructs theta-associate and conjugate families by
//! marching the coupled `(h^theta, psi^theta)` system, and verifies the
//! defining identities (harmonic-map equation, sinh-Gordon equation, Boechner
//! formula, Gauss equation, metric and conformality relations) by grid
//! residuals.
//!
//! Core numerics are generic over the scalar type through [`Real`]; the
//! concrete `f64` aliases below are what the CLI and the file formats use.

pub mod analysis;
pub mod associate;
pub mod base;
pub mod catalog;
pub mod error;
pub mod grid;
pub mod immersion;
pub mod interp;
pub mod io;
pub mod quad;
pub mod report;
pub mod scalar;
pub mod stencil;
pub mod tolerances;
pub mod wdata;

pub use base::{AmbientIsometry, BaseManifold, MobiusMap};
pub use error::{Error, Result};
pub use grid::{ComplexField, GridDomain, RealField, ResidualField};
pub use immersion::Immersion;
pub use scalar::{Real, C};
pub use wdata::{HarmonicField, OmegaConvention, WeierstrassField};

/// Concrete aliases at the default (double) precision.
pub type Grid64 = GridDomain<f64>;
pub type RealField64 = RealField<f64>;
pub type ComplexField64 = ComplexField<f64>;
pub type HarmonicField64 = HarmonicField<f64>;
pub type WeierstrassField64 = WeierstrassField<f64>;
pub type Immersion64 = Immersion<f64>;
pub type Isometry64 = AmbientIsometry<f64>;
