//! Numerical library for singular integrals along monomial curves in the
//! plane: anisotropic rectangle geometry, principal-value and restricted
//! quadrature for curve Hilbert transforms, mean-oscillation norms, and the
//! approximate weak factorization (awf) constructions built on top of them.
//!
//! The crate is organised around evaluable scalar fields ([`fields`]), the
//! curves themselves ([`curve`]), the derived rectangle/trace geometry
//! ([`geometry`]), transform quadrature engines ([`transforms`]), norm
//! estimators ([`norms`]), and the two factorization pipelines: the
//! directional model case on four rectangles ([`directional`]) and the
//! parabolic construction through the intersection region `W` ([`awf`]).

pub mod awf;
pub mod curve;
pub mod directional;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod norms;
pub mod sampling;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A point in the plane.
pub type Point = [f64; 2];
