use super::C;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A pole ω of order m with principal part c_{-m}, …, c_{-1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDimension {
    pub location: C,
    pub order: usize,
    pub principal_part: Vec<C>,
}

impl ComplexDimension {
    pub fn new(location: C, principal_part: Vec<C>) -> Result<Self> {
        if principal_part.is_empty() {
            return Err(Error::Parameter("a complex dimension needs order >= 1".into()));
        }
        if !location.re.is_finite() || !location.im.is_finite() {
            return Err(Error::NonFinite("dimension location".into()));
        }
        Ok(ComplexDimension { location, order: principal_part.len(), principal_part })
    }

    pub fn residue(&self) -> C {
        self.principal_part[self.order - 1]
    }

    /// Laurent coefficient c_{-j}, zero beyond the order.
    pub fn coeff(&self, j: usize) -> C {
        if j == 0 || j > self.order {
            C::new(0.0, 0.0)
        } else {
            self.principal_part[self.order - j]
        }
    }

    pub fn is_real(&self) -> bool {
        self.location.im.abs() < 1e-9
    }
}

/// Laurent coefficients c_{-M}, …, c_M of a function about a point.
#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    pub center: C,
    pub radius: f64,
    pub max_order: usize,
    pub nodes: usize,
    /// max |f| on the integration circle
    pub scale: f64,
    coeffs: Vec<C>,
}

/// Relative size below which a principal-part coefficient counts as zero.
pub const POLE_TOLERANCE: f64 = 1e-9;

impl LaurentExpansion {
    pub fn coeff(&self, q: i64) -> C {
        let idx = q + self.max_order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Regular coefficients c_0, …, c_M.
    pub fn regular(&self) -> Vec<C> {
        (0..=self.max_order as i64).map(|q| self.coeff(q)).collect()
    }

    /// The pole carried by these coefficients, or None if the point is regular.
    pub fn dimension(&self) -> Option<ComplexDimension> {
        let mut order = 0;
        for m in (1..=self.max_order).rev() {
            let c = self.coeff(-(m as i64));
            if c.norm() * self.radius.powi(-(m as i32)) > POLE_TOLERANCE * self.scale.max(1e-300) {
                order = m;
                break;
            }
        }
        if order == 0 {
            return None;
        }
        let pp = (1..=order).rev().map(|m| self.coeff(-(m as i64))).collect();
        Some(ComplexDimension { location: self.center, order, principal_part: pp })
    }

    /// Evaluate the truncated Laurent series at s.
    ///
    /// Negative powers stop at the detected pole order; the rest are
    /// quadrature noise that would be amplified inside the circle.
    pub fn eval(&self, s: C) -> C {
        let u = s - self.center;
        let order = self.dimension().map_or(0, |d| d.order) as i64;
        let mut acc = C::new(0.0, 0.0);
        for q in -order..=(self.max_order as i64) {
            acc += self.coeff(q) * u.powi(q as i32);
        }
        acc
    }
}

fn coefficients<F: Fn(C) -> Result<C>>(f: &F, omega: C, radius: f64, max_order: usize, n: usize) -> Result<(Vec<C>, f64)> {
    let mut vals = Vec::with_capacity(n);
    let mut scale: f64 = 0.0;
    for j in 0..n {
        let th = 2.0 * PI * j as f64 / n as f64;
        let v = f(omega + C::from_polar(radius, th))?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite("function on Laurent circle".into()));
        }
        scale = scale.max(v.norm());
        vals.push(v);
    }
    let m = max_order as i64;
    let mut out = Vec::with_capacity(2 * max_order + 1);
    for q in -m..=m {
        let mut acc = C::new(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            let th = 2.0 * PI * j as f64 / n as f64;
            acc += v * C::from_polar(1.0, -(q as f64) * th);
        }
        out.push(acc / n as f64 * radius.powi(-(q as i32)));
    }
    Ok((out, scale))
}

/// Laurent coefficients by trapezoidal quadrature on |s − ω| = radius.
///
/// Starts at 256 nodes and doubles until successive estimates agree to 1e-10
/// relative to the size of f on the circle.
pub fn contour_laurent<F: Fn(C) -> Result<C>>(f: &F, omega: C, radius: f64, max_order: usize) -> Result<LaurentExpansion> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("contour radius {radius} must be positive")));
    }
    let mut n = 256;
    let (mut prev, mut scale) = coefficients(f, omega, radius, max_order, n)?;
    loop {
        n *= 2;
        let (cur, sc) = coefficients(f, omega, radius, max_order, n)?;
        scale = scale.max(sc);
        let m = max_order as i64;
        let worst = (-m..=m)
            .map(|q| (cur[(q + m) as usize] - prev[(q + m) as usize]).norm() * radius.powi(q as i32))
            .fold(0.0, f64::max);
        if worst <= 1e-10 * scale.max(1e-300) {
            return Ok(LaurentExpansion { center: omega, radius, max_order, nodes: n, scale, coeffs: cur });
        }
        if n >= 1 << 15 {
            return Err(Error::Quadrature(format!(
                "Laurent coefficients about {omega} unstable after {n} nodes (change {worst:e})"
            )));
        }
        prev = cur;
    }
}

/// Default contour radius: 0.4 × distance to the nearest other singularity.
pub fn default_radius(omega: C, others: &[C]) -> f64 {
    let d = others
        .iter()
        .map(|o| (o - omega).norm())
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min);
    if d.is_finite() {
        0.4 * d
    } else {
        0.4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let f = |s: C| Ok(1.0 / (s - 1.0));
        let l = contour_laurent(&f, C::new(1.0, 0.0), 0.4, 4).unwrap();
        let d = l.dimension().unwrap();
        assert_eq!(d.order, 1);
        assert!((d.residue() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn double_pole_and_regular_part() {
        let f = |s: C| Ok(s.exp() / ((s - 2.0) * (s - 2.0)));
        let l = contour_laurent(&f, C::new(2.0, 0.0), 0.5, 6).unwrap();
        let d = l.dimension().unwrap();
        let e2 = 2f64.exp();
        assert_eq!(d.order, 2);
        assert!((d.principal_part[0].re - e2).abs() < 1e-11);
        assert!((d.principal_part[1].re - e2).abs() < 1e-11);
        assert!((l.coeff(0).re - e2 / 2.0).abs() < 1e-11);
    }

    #[test]
    fn regular_point_has_no_dimension() {
        let f = |s: C| Ok(s.sin());
        let l = contour_laurent(&f, C::new(0.3, 0.1), 0.4, 3).unwrap();
        assert!(l.dimension().is_none());
    }
}
