use super::{check_languidity, kernel_weight_roots, Window};
use crate::complexcore::C;
use crate::error::{Error, Result};
use crate::quad;
use crate::zetacat::ZetaHandle;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Screen integral R(t) with the estimated contribution of |Im s| > T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenError {
    pub value: f64,
    pub truncation_bound: f64,
    /// C · t^{N−σ+k} with C = (1/2π)∫|z(s)/w(s)| |ds| over the whole screen.
    pub apriori_bound: f64,
}

/// (2πi)⁻¹ ∫ t^{N−s+k}/w(s) · z(s) ds along Re s = σ, |Im s| ≤ T.
pub fn screen_error_term(z: &ZetaHandle, window: &Window, t: f64, level: usize, im_max: f64) -> Result<ScreenError> {
    if !(t > 0.0) || !(im_max > 0.0) {
        return Err(Error::Parameter(format!("need t > 0 and T > 0 (t={t}, T={im_max})")));
    }
    let sigma = window.screen_re;
    check_languidity(z, sigma, level)?;
    let n = z.ambient_dim as f64;
    let roots = kernel_weight_roots(z, level);
    let lt = t.ln();
    let scale = ((n - sigma + level as f64) * lt).exp();
    let ratio = |y: f64| -> Result<C> {
        let s = C::new(sigma, y);
        let mut v = z.evaluate(s)?;
        for r in &roots {
            v /= r - s;
        }
        Ok(v)
    };
    // panels short enough to resolve t^{−iy}
    let h = (PI / lt.abs().max(1.0)).min(1.0);
    let panels = (im_max / h).ceil() as usize;
    let h = im_max / panels as f64;
    let parts: Vec<Result<(C, f64)>> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let err = std::cell::Cell::new(None);
            let f = |y: f64| match ratio(y) {
                Ok(v) => v * C::new(0.0, -y * lt).exp(),
                Err(e) => {
                    err.set(Some(e));
                    C::new(0.0, 0.0)
                }
            };
            let g = |y: f64| ratio(y).map(|v| v.norm()).unwrap_or(0.0);
            let v = quad::adaptive(&f, a, b, 1e-14, 1e-9)?;
            let m = quad::adaptive(&g, a, b, 1e-14, 1e-6)?;
            if let Some(e) = err.take() {
                return Err(e);
            }
            Ok((v, m))
        })
        .collect();
    let mut integral = C::new(0.0, 0.0);
    let mut mass = 0.0;
    for p in parts {
        let (v, m) = p?;
        integral += v;
        mass += m;
    }
    // conjugate symmetry: ∫_{−T}^{T} = 2 Re ∫_0^T
    let value = scale * integral.re / PI;
    let deg = roots.len() as f64;
    let kappa = z.languidity.kappa_at(sigma);
    let envelope = [0.5 * im_max, 0.75 * im_max, im_max]
        .iter()
        .map(|&y| ratio(y).map(|v| v.norm() * y.powf(deg - kappa)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let tail = envelope * im_max.powf(kappa - deg + 1.0) / (deg - kappa - 1.0);
    Ok(ScreenError {
        value,
        truncation_bound: scale * tail / PI,
        apriori_bound: scale * (mass + tail) / PI,
    })
}
