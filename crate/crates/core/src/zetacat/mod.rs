//! Closed-form fractal zeta functions and the transforms between their kinds.

pub mod catalog;
pub mod lb;
pub mod rows;

pub use catalog::{catalog_zeta, spray_zeta, steiner_tube_zeta, string_geometric_zeta, string_geometric_zeta_direct};
pub use lb::zeta_lb;
pub use rows::{lattice_sum, partial_fractions, RowModel, RowTerm};

use crate::complexcore::{find_moran_roots, Rectangle, C};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaKind {
    Distance,
    Tube,
    Shell,
    Mellin,
    GeometricString,
    Scaling,
}

/// Growth data along screens.
///
/// `kappa` is the exponent for screens at Re s ≥ 0; left of that it grows by
/// `kappa_slope` per unit of −σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanguidityProfile {
    pub kappa: f64,
    pub kappa_slope: f64,
    pub strong: bool,
    pub scale_lambda: f64,
    pub b_constant: Option<f64>,
}

impl LanguidityProfile {
    pub fn strong(kappa: f64, lambda: f64, b: f64) -> Self {
        LanguidityProfile { kappa, kappa_slope: 0.0, strong: true, scale_lambda: lambda, b_constant: Some(b) }
    }

    pub fn weak(kappa: f64, slope: f64) -> Self {
        LanguidityProfile { kappa, kappa_slope: slope, strong: false, scale_lambda: 1.0, b_constant: None }
    }

    /// κ for a vertical screen at Re s = σ.
    pub fn kappa_at(&self, sigma: f64) -> f64 {
        self.kappa + self.kappa_slope * (-sigma).max(0.0)
    }

    fn shifted(&self, dk: f64) -> Self {
        LanguidityProfile { kappa: self.kappa + dk, ..*self }
    }
}

/// Where poles of a handle may sit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PoleFamily {
    Point { re: f64, im: f64 },
    /// re + i(im0 + k·period), k ∈ ℤ
    Row { re: f64, im0: f64, period: f64 },
    /// Solutions of Σ r_j^s = 1.
    Moran { ratios: Vec<f64> },
    /// Real candidates start − m·step, m ≥ 0.
    Arithmetic { start: f64, step: f64 },
}

impl PoleFamily {
    pub fn point(x: f64) -> Self {
        PoleFamily::Point { re: x, im: 0.0 }
    }
}

type Eval = Arc<dyn Fn(C) -> Result<C> + Send + Sync>;

/// An evaluatable meromorphic fractal zeta function with its metadata.
#[derive(Clone)]
pub struct ZetaHandle {
    pub name: String,
    pub kind: ZetaKind,
    pub ambient_dim: usize,
    pub delta: f64,
    /// |A_δ ∩ Ω|
    pub boundary_volume: Option<f64>,
    /// Whether Ω ⊆ A_δ.
    pub omega_covered: bool,
    pub poles: Vec<PoleFamily>,
    pub rows: Vec<RowModel>,
    pub languidity: LanguidityProfile,
    pub strip: Option<(f64, f64)>,
    /// Upper end of the t-range on which the tube formula holds.
    pub t_max: f64,
    /// Largest real part among the poles (the Minkowski dimension for catalog entries).
    pub dimension_hint: f64,
    eval: Eval,
}

impl fmt::Debug for ZetaHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZetaHandle")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("ambient_dim", &self.ambient_dim)
            .field("delta", &self.delta)
            .field("poles", &self.poles)
            .field("t_max", &self.t_max)
            .finish()
    }
}

pub(crate) fn pole_or(v: C, s: C) -> Result<C> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole { re: s.re, im: s.im })
    }
}

impl ZetaHandle {
    /// Handle with default metadata around an evaluator.
    pub fn from_fn<F>(name: &str, kind: ZetaKind, ambient_dim: usize, delta: f64, f: F) -> Self
    where
        F: Fn(C) -> Result<C> + Send + Sync + 'static,
    {
        ZetaHandle {
            name: name.to_string(),
            kind,
            ambient_dim,
            delta,
            boundary_volume: None,
            omega_covered: false,
            poles: Vec::new(),
            rows: Vec::new(),
            languidity: LanguidityProfile::weak(0.0, 0.0),
            strip: None,
            t_max: delta,
            dimension_hint: 0.0,
            eval: Arc::new(f),
        }
    }

    pub fn evaluate(&self, s: C) -> Result<C> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::NonFinite("zeta argument".into()));
        }
        let v = (self.eval)(s)?;
        pole_or(v, s)
    }

    /// Candidate pole locations inside a rectangle.
    pub fn known_poles_hint(&self, rect: &Rectangle) -> Result<Vec<C>> {
        let mut out = Vec::new();
        for fam in &self.poles {
            match fam {
                PoleFamily::Point { re, im } => {
                    let p = C::new(*re, *im);
                    if rect.contains(p) {
                        out.push(p);
                    }
                }
                PoleFamily::Row { re, im0, period } => {
                    if *re >= rect.re_min && *re <= rect.re_max {
                        let lo = ((rect.im_min - im0) / period).ceil() as i64;
                        let hi = ((rect.im_max - im0) / period).floor() as i64;
                        for k in lo..=hi {
                            out.push(C::new(*re, im0 + k as f64 * period));
                        }
                    }
                }
                PoleFamily::Moran { ratios } => {
                    out.extend(find_moran_roots(ratios, rect)?.into_iter().map(|d| d.location));
                }
                PoleFamily::Arithmetic { start, step } => {
                    if rect.im_min <= 0.0 && rect.im_max >= 0.0 {
                        let mut x = *start;
                        while x >= rect.re_min {
                            if x <= rect.re_max {
                                out.push(C::new(x, 0.0));
                            }
                            x -= step;
                        }
                    }
                }
            }
        }
        let mut uniq: Vec<C> = Vec::new();
        for p in out {
            if !uniq.iter().any(|q| (q - p).norm() < 1e-9) {
                uniq.push(p);
            }
        }
        uniq.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap().then(a.re.partial_cmp(&b.re).unwrap()));
        Ok(uniq)
    }

    fn derived<F>(&self, kind: ZetaKind, f: F) -> ZetaHandle
    where
        F: Fn(C) -> Result<C> + Send + Sync + 'static,
    {
        ZetaHandle { kind, eval: Arc::new(f), ..self.clone() }
    }

    fn with_point(mut self, x: f64) -> Self {
        if !self.poles.iter().any(|p| matches!(p, PoleFamily::Point { re, im } if (*re - x).abs() < 1e-12 && *im == 0.0)) {
            self.poles.push(PoleFamily::point(x));
        }
        self
    }
}

/// Average across a removable point of f at s0.
fn removable<F: Fn(C) -> Result<C>>(f: &F, s: C, s0: f64) -> Result<C> {
    if (s - s0).norm() < 1e-7 {
        let h = C::new(lb::REMOVABLE_OFFSET, 0.0);
        Ok(0.5 * (f(s + h)? + f(s - h)?))
    } else {
        f(s)
    }
}

fn require(z: &ZetaHandle, kinds: &[ZetaKind], op: &str) -> Result<()> {
    if kinds.contains(&z.kind) {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{op} expects {:?}, got a {:?} handle", kinds, z.kind)))
    }
}

/// ζ̃(s) = (ζ(s) − δ^{s−N}|A_δ∩Ω|)/(N − s).
pub fn tube_from_distance(dz: &ZetaHandle, boundary_volume: f64) -> Result<ZetaHandle> {
    require(dz, &[ZetaKind::Distance], "tube_from_distance")?;
    let n = dz.ambient_dim as f64;
    let (d, delta) = (dz.clone(), dz.delta);
    let raw = move |s: C| -> Result<C> { Ok((d.evaluate(s)? - (s - n).scale(delta.ln()).exp() * boundary_volume) / (n - s)) };
    let f = move |s: C| removable(&raw, s, n);
    let mut h = dz.derived(ZetaKind::Tube, f).with_point(n);
    h.boundary_volume = Some(boundary_volume);
    h.rows = dz.rows.iter().map(|r| r.transformed(C::new(-1.0, 0.0), 0.0, &[], &[C::new(n, 0.0)])).collect();
    h.languidity = dz.languidity.shifted(-1.0);
    Ok(h)
}

/// ζ(s) = δ^{s−N}|A_δ∩Ω| + (N − s)ζ̃(s).
pub fn distance_from_tube(tz: &ZetaHandle, boundary_volume: f64) -> Result<ZetaHandle> {
    require(tz, &[ZetaKind::Tube], "distance_from_tube")?;
    let n = tz.ambient_dim as f64;
    let (t, delta) = (tz.clone(), tz.delta);
    let raw = move |s: C| -> Result<C> { Ok((s - n).scale(delta.ln()).exp() * boundary_volume + (n - s) * t.evaluate(s)?) };
    let f = move |s: C| removable(&raw, s, n);
    let mut h = tz.derived(ZetaKind::Distance, f);
    h.poles.retain(|p| !matches!(p, PoleFamily::Point { re, im } if (*re - n).abs() < 1e-12 && *im == 0.0));
    h.boundary_volume = Some(boundary_volume);
    h.rows = tz.rows.iter().map(|r| r.transformed(C::new(-1.0, 0.0), 0.0, &[C::new(n, 0.0)], &[])).collect();
    h.languidity = tz.languidity.shifted(1.0);
    Ok(h)
}

fn divided_by_n_minus_s(dz: &ZetaHandle, kind: ZetaKind) -> ZetaHandle {
    let n = dz.ambient_dim as f64;
    let d = dz.clone();
    let mut h = dz.derived(kind, move |s: C| Ok(d.evaluate(s)? / (n - s))).with_point(n);
    h.rows = dz.rows.iter().map(|r| r.transformed(C::new(-1.0, 0.0), 0.0, &[], &[C::new(n, 0.0)])).collect();
    h.languidity = dz.languidity.shifted(-1.0);
    h
}

/// ζ̆(s) = ζ(s)/(N − s); simple pole at N with residue −|A_δ∩Ω|.
pub fn shell_from_distance(dz: &ZetaHandle) -> Result<ZetaHandle> {
    require(dz, &[ZetaKind::Distance], "shell_from_distance")?;
    Ok(divided_by_n_minus_s(dz, ZetaKind::Shell))
}

/// ζ^𝔐(s) = ζ(s)/(N − s), holomorphic on the strip (D, N).
pub fn mellin_from_distance(dz: &ZetaHandle) -> Result<ZetaHandle> {
    require(dz, &[ZetaKind::Distance], "mellin_from_distance")?;
    if !dz.omega_covered {
        return Err(Error::DeltaTooSmall(format!("{}: Ω is not contained in A_δ for δ = {}", dz.name, dz.delta)));
    }
    let mut h = divided_by_n_minus_s(dz, ZetaKind::Mellin);
    h.strip = Some((dz.dimension_hint, dz.ambient_dim as f64));
    Ok(h)
}

/// s ↦ λ^s ζ(s), the distance zeta of λA relative to λΩ.
pub fn scale_zeta(z: &ZetaHandle, lambda: f64) -> Result<ZetaHandle> {
    require(z, &[ZetaKind::Distance], "scale_zeta")?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("scale λ must be positive, got {lambda}")));
    }
    let d = z.clone();
    let ll = lambda.ln();
    let mut h = z.derived(ZetaKind::Distance, move |s: C| Ok((s * ll).exp() * d.evaluate(s)?));
    h.delta = z.delta * lambda;
    h.boundary_volume = z.boundary_volume.map(|v| v * lambda.powi(z.ambient_dim as i32));
    h.rows = z.rows.iter().map(|r| r.transformed(C::new(1.0, 0.0), ll, &[], &[])).collect();
    h.t_max = z.t_max * lambda;
    h.languidity.scale_lambda = z.languidity.scale_lambda / lambda;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment() -> ZetaHandle {
        let delta = 2.0f64;
        let mut h = ZetaHandle::from_fn("segment", ZetaKind::Distance, 1, delta, move |s: C| {
            Ok(2.0 * (s * delta.ln()).exp() / s)
        });
        h.poles = vec![PoleFamily::point(0.0)];
        h
    }

    #[test]
    fn segment_tube_zeta() {
        let dz = segment();
        let tz = tube_from_distance(&dz, 5.0).unwrap();
        let s = C::new(0.3, 0.7);
        let d = 2f64;
        let expect = 2.0 * (s * d.ln()).exp() / s + ((s - 1.0) * d.ln()).exp() / (s - 1.0);
        assert!((tz.evaluate(s).unwrap() - expect).norm() < 1e-13);
        let back = distance_from_tube(&tz, 5.0).unwrap();
        for s in [C::new(0.3, 0.7), C::new(-1.2, 4.0), C::new(2.5, -0.1)] {
            assert!((back.evaluate(s).unwrap() - dz.evaluate(s).unwrap()).norm() < 1e-12 * dz.evaluate(s).unwrap().norm());
        }
        // removable at s = N after the round trip
        assert!((back.evaluate(C::new(1.0, 0.0)).unwrap() - C::new(4.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn scaling_by_one_is_identity() {
        let dz = segment();
        let s = C::new(0.4, 2.0);
        assert_eq!(scale_zeta(&dz, 1.0).unwrap().evaluate(s).unwrap(), dz.evaluate(s).unwrap());
    }
}
