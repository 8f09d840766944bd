//! Numerical fractal zeta values: Monte Carlo distance zetas, tube-zeta
//! quadrature and truncated Mellin inversion.

use crate::complexcore::C;
use crate::error::{Error, Result};
use crate::geometry::{distance_to_set, PlanarRecipe, TubeOracle};
use crate::quad;
use crate::zetacat::{ZetaHandle, ZetaKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Monte Carlo schedule: `samples` points in strata of `chunk` points each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunk: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig { samples, seed, chunk: 1024 }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 10_000 || self.chunk == 0 || self.chunk > self.samples {
            return Err(Error::Parameter(format!(
                "Monte Carlo needs at least 10⁴ samples and 0 < chunk ≤ samples (samples={}, chunk={})",
                self.samples, self.chunk
            )));
        }
        Ok(())
    }
}

/// Integration region: a box, the recipe's Ω, and an optional cut d(x, A) < δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McRegion {
    pub bbox: (f64, f64, f64, f64),
    pub delta: Option<f64>,
    /// Upper box dimension of the set; the integral needs Re s > dimension.
    pub dimension: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: C,
    pub std_err_re: f64,
    pub std_err_im: f64,
}

/// ∫_Ω d(x,A)^{s−2} dx by stratified uniform sampling.
///
/// The box is cut into a grid of strata with `chunk` samples each; stratum j
/// draws from its own ChaCha stream, so the result does not depend on threads.
pub fn mc_distance_zeta(set: &PlanarRecipe, region: &McRegion, s: C, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    set.validate()?;
    if s.re <= region.dimension {
        return Err(Error::Divergent(format!(
            "d^(s−2) is not integrable for Re s = {} ≤ {}",
            s.re, region.dimension
        )));
    }
    let (x0, x1, y0, y1) = region.bbox;
    let strata = (cfg.samples / cfg.chunk).max(1);
    let m = (strata as f64).sqrt().floor().max(1.0) as u64;
    let (hx, hy) = ((x1 - x0) / m as f64, (y1 - y0) / m as f64);
    let area = hx * hy;
    let per = cfg.samples / (m * m);
    let e = s - 2.0;
    let parts: Vec<(C, f64, f64)> = (0..m * m)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(j);
            let (ix, iy) = (j % m, j / m);
            let (bx, by) = (x0 + ix as f64 * hx, y0 + iy as f64 * hy);
            let (mut sum, mut sq_re, mut sq_im) = (C::new(0.0, 0.0), 0.0, 0.0);
            for _ in 0..per {
                let p = (bx + rng.gen::<f64>() * hx, by + rng.gen::<f64>() * hy);
                if !set.in_omega(p) {
                    continue;
                }
                let d = distance_to_set(p, set, region.depth);
                if region.delta.is_some_and(|dl| d >= dl) || d <= 0.0 {
                    continue;
                }
                let v = (e * d.ln()).exp();
                sum += v;
                sq_re += v.re * v.re;
                sq_im += v.im * v.im;
            }
            let n = per as f64;
            let mean = sum / n;
            let var_re = (sq_re / n - mean.re * mean.re).max(0.0) / (n - 1.0);
            let var_im = (sq_im / n - mean.im * mean.im).max(0.0) / (n - 1.0);
            (mean * area, var_re * area * area, var_im * area * area)
        })
        .collect();
    let mut value = C::new(0.0, 0.0);
    let (mut vr, mut vi) = (0.0, 0.0);
    for (v, a, b) in parts {
        value += v;
        vr += a;
        vi += b;
    }
    Ok(McEstimate { value, std_err_re: vr.sqrt(), std_err_im: vi.sqrt() })
}

/// Smallest t reached by the tube-zeta quadrature; below it a power-law fit is integrated.
pub const TUBE_ZETA_EPS: f64 = 1e-80;

/// ∫₀^δ t^{s−N−1} V(t) dt.
///
/// Integrates in u = log t⁻¹ on unit panels down to t = 1e−80, and adds the
/// head ∫₀^ε from the fit V(t) ≈ M t^{N−D} on the last decade.
pub fn numeric_tube_zeta<O: TubeOracle + ?Sized>(oracle: &O, s: C, delta: f64, n: usize) -> Result<C> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("δ must be positive, got {delta}")));
    }
    let nf = n as f64;
    let e = s - nf;
    let u0 = -delta.ln();
    let u1 = -TUBE_ZETA_EPS.ln();
    let panels = (u1 - u0).ceil() as usize;
    let h = (u1 - u0) / panels as f64;
    let f = |u: f64| -> C {
        let v = oracle.volume((-u).exp());
        if v == 0.0 {
            C::new(0.0, 0.0)
        } else {
            (-e * u).exp() * v
        }
    };
    let rough: f64 = (0..panels)
        .into_par_iter()
        .map(|i| quad::gk15(&f, u0 + i as f64 * h, u0 + (i + 1) as f64 * h).0.norm())
        .sum();
    let abs_tol = 1e-15 * rough.max(1e-300) / panels as f64;
    let parts: Vec<Result<C>> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let a = u0 + i as f64 * h;
            quad::adaptive(&f, a, a + h, abs_tol, 1e-13)
        })
        .collect();
    let mut acc = C::new(0.0, 0.0);
    for p in parts {
        acc += p?;
    }
    // head: V(t) ≈ M t^{N−D} on (0, ε)
    let (v1, v2) = (oracle.volume(TUBE_ZETA_EPS), oracle.volume(10.0 * TUBE_ZETA_EPS));
    if v1 > 0.0 && v2 > 0.0 {
        let expo = (v2 / v1).log10();
        let big_m = v1 / TUBE_ZETA_EPS.powf(expo);
        let q = e + expo;
        if q.re <= 0.0 {
            return Err(Error::Divergent(format!("tube zeta integral diverges at s = {s}")));
        }
        acc += big_m * (q * TUBE_ZETA_EPS.ln()).exp() / q;
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(Error::NonFinite("tube zeta integral".into()));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub value: f64,
    pub imag_residual: f64,
}

/// (2πi)⁻¹ ∫_{c−iT}^{c+iT} t^{N−s} z(s) ds for a tube or Mellin zeta function.
pub fn mellin_invert_tube(z: &ZetaHandle, t: f64, c: f64, im_max: f64) -> Result<Inversion> {
    let n = z.ambient_dim as f64;
    let d = z.dimension_hint;
    let upper = match z.kind {
        ZetaKind::Tube => {
            if !(t > 0.0 && t < z.delta) {
                return Err(Error::Validity { t, t_max: z.delta });
            }
            n + 1.0
        }
        ZetaKind::Mellin => {
            if !(t > 0.0) {
                return Err(Error::Validity { t, t_max: f64::INFINITY });
            }
            n
        }
        k => return Err(Error::Mismatch(format!("inversion needs a tube or Mellin handle, got {k:?}"))),
    };
    if !(c > d && c < upper) {
        return Err(Error::Parameter(format!("abscissa c = {c} must lie in ({d}, {upper})")));
    }
    if !(im_max > 0.0) {
        return Err(Error::Parameter(format!("T must be positive, got {im_max}")));
    }
    let lt = t.ln();
    let g = |y: f64| -> Result<C> {
        let s = C::new(c, y);
        Ok(z.evaluate(s)? * ((n - s) * lt).exp())
    };
    // panels one oscillation period wide, cut halfway between pole rows
    let (period, im0) = z.rows.first().map(|r| (r.period, r.im0)).unwrap_or((2.0, 0.0));
    let mut cuts = vec![-im_max];
    let mut y = im0 + ((-im_max - im0) / period).floor() * period + 0.5 * period;
    while y < im_max {
        if y > -im_max {
            cuts.push(y);
        }
        y += period;
    }
    cuts.push(im_max);
    let parts: Vec<Result<C>> = cuts
        .par_windows(2)
        .map(|w| {
            let err = std::cell::Cell::new(None);
            let f = |y: f64| match g(y) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    C::new(0.0, 0.0)
                }
            };
            let v = quad::adaptive(&f, w[0], w[1], 1e-15, 1e-10)?;
            match err.take() {
                Some(e) => Err(e),
                None => Ok(v),
            }
        })
        .collect();
    let mut acc = C::new(0.0, 0.0);
    for p in parts {
        acc += p?;
    }
    let v = acc / (2.0 * PI);
    if v.im.abs() > 1e-3 * v.re.abs() {
        return Err(Error::Residual { residual: v.im.abs(), value: v.re });
    }
    Ok(Inversion { value: v.re, imag_residual: v.im.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EntryParams, FractalString, RfdDescriptor, SegmentOracle};
    use crate::zetacat::{catalog_zeta, tube_from_distance};

    #[test]
    fn segment_tube_zeta_integral() {
        let s = C::new(1.7, 0.6);
        let d = 2.0f64;
        let got = numeric_tube_zeta(&SegmentOracle, s, d, 1).unwrap();
        let expect = 2.0 * (s * d.ln()).exp() / s + ((s - 1.0) * d.ln()).exp() / (s - 1.0);
        assert!((got - expect).norm() < 1e-8, "{got} vs {expect}");
    }

    #[test]
    fn cantor_tube_zeta_at_two() {
        let got = numeric_tube_zeta(&FractalString::cantor(), C::new(2.0, 0.0), 1.0, 1).unwrap();
        assert!((got - C::new(27.0 / 28.0, 0.0)).norm() < 1e-9, "{got}");
    }

    #[test]
    fn segment_inversion() {
        let z = catalog_zeta(&RfdDescriptor::new(EntryParams::Segment).unwrap()).unwrap();
        let tz = tube_from_distance(&z, 5.0).unwrap();
        let v = mellin_invert_tube(&tz, 0.5, 1.5, 2000.0).unwrap();
        assert!((v.value - 2.0).abs() < 1e-3, "{v:?}");
        assert!(mellin_invert_tube(&tz, 3.0, 1.5, 100.0).is_err());
    }

    #[test]
    fn mc_at_ambient_dimension_is_area() {
        let region = McRegion { bbox: (0.0, 1.0, 0.0, 0.5 * 3f64.sqrt()), delta: None, dimension: 1.59, depth: 6 };
        let cfg = McConfig::new(20_000, 7);
        let est = mc_distance_zeta(&PlanarRecipe::GasketInner, &region, C::new(2.0, 0.0), &cfg).unwrap();
        assert!((est.value.re - 3f64.sqrt() / 4.0).abs() < 4.0 * est.std_err_re.max(1e-3), "{est:?}");
        assert!(mc_distance_zeta(&PlanarRecipe::GasketInner, &region, C::new(1.5, 0.0), &cfg).is_err());
    }
}
