//! Fractal zeta functions, complex dimensions and pointwise tube formulas.

pub mod complexcore;
pub mod error;
pub mod geometry;
pub mod quad;
pub mod tubeformula;
pub mod zetacat;
pub mod zetanum;

pub use error::{Error, Result};
