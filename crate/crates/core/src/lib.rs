//! Numerics for the relativistic Schrodinger operator H = sqrt(-Laplace) + V
//! on R^3: explicit free-resolvent kernels, Birman-Schwinger matrices,
//! low-energy expansions, generalized eigenfunctions, scattering matrices,
//! propagators, and dilation/Mourre identities, at desk scale.
//!
//! Everything is generic over the floating-point scalar through
//! [`scalar::Real`]; the `*64` aliases below fix `f64`, which is what the
//! CLI and the acceptance suite use.

pub mod error;
pub mod scalar;

pub mod grid;
pub mod io;
pub mod kernels;
pub mod potential;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

/// Concrete f64 aliases for the main types.
pub type Grid3f64 = grid::Grid3<f64>;
pub type Field64 = grid::Field<f64>;
pub type SphereQuad64 = grid::SphereQuad<f64>;
pub type C64 = Cplx<f64>;
