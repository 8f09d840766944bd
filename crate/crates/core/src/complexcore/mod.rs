//! Complex-plane machinery: special functions, Laurent extraction by contour
//! quadrature, and root finding for Dirichlet polynomials.

pub mod contour;
pub mod moran;
pub mod special;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type C = num_complex::Complex64;

pub use contour::{contour_laurent, default_radius, ComplexDimension, LaurentExpansion};
pub use moran::{find_moran_roots, moran_real_root, moran_root_strip};
pub use special::{gamma, hurwitz_zeta, ln_gamma, pochhammer, riemann_zeta};

/// Axis-aligned search region in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !ok || re_min >= re_max || im_min >= im_max {
            return Err(Error::Parameter(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Rectangle { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, s: C) -> bool {
        s.re >= self.re_min && s.re <= self.re_max && s.im >= self.im_min && s.im <= self.im_max
    }

    pub fn inflate(&self, eps: f64) -> Rectangle {
        Rectangle {
            re_min: self.re_min - eps,
            re_max: self.re_max + eps,
            im_min: self.im_min - eps,
            im_max: self.im_max + eps,
        }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn center(&self) -> C {
        C::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }
}

/// Reject non-finite complex values.
pub fn finite(v: C, what: &str) -> Result<C> {
    special::check(v, what)
}
