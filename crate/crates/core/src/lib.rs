//! Numerical laboratory for maps of bi-conformal energy: explicit
//! homeomorphisms between singular model domains, their distortion
//! functionals, and an axisymmetric quadrature engine that classifies the
//! convergence of the associated energy integrals.

pub mod diffgeo;
pub mod domain;
pub mod error;
pub mod mapzoo;
pub mod matrix;
pub mod point;
pub mod profile;
pub mod quad;

pub use error::{Error, Result};
pub use matrix::MatN;
pub use point::PointN;
