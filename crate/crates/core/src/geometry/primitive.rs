use super::TubeOracle;
use crate::error::{Error, Result};
use crate::quad::adaptive;

/// V^{[k]}(t) = ∫_0^t (t−u)^{k−1}/(k−1)! V(u) du.
///
/// Exact piecewise primitives are used when the oracle has them; otherwise the
/// Cauchy form of the k-fold integral is integrated on dyadic panels split at kinks.
pub fn primitive_tube<O: TubeOracle + ?Sized>(oracle: &O, k: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("primitive needs t > 0, got {t}")));
    }
    if k == 0 {
        return Ok(oracle.volume(t));
    }
    if let Some(v) = oracle.exact_primitive(k, t) {
        return Ok(v);
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let f = |u: f64| (t - u).powi(k as i32 - 1) / fact * oracle.volume(u);
    let mut cuts: Vec<f64> = (0..60).map(|j| t * 0.5f64.powi(j)).collect();
    cuts.extend(oracle.kinks(t).into_iter().filter(|x| *x > 0.0 && *x < t));
    cuts.push(0.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let scale = oracle.volume(t).abs().max(1e-300) * t.powi(k as i32) / (fact * k as f64);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += adaptive(&f, w[0], w[1], 1e-15 * scale, 1e-13)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::oracles::SegmentOracle;
    use crate::geometry::strings::FractalString;

    struct Opaque<O>(O);
    impl<O: TubeOracle> TubeOracle for Opaque<O> {
        fn volume(&self, t: f64) -> f64 {
            self.0.volume(t)
        }
        fn kinks(&self, t: f64) -> Vec<f64> {
            self.0.kinks(t)
        }
    }

    #[test]
    fn segment_first_primitive() {
        assert!((primitive_tube(&SegmentOracle, 1, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((primitive_tube(&Opaque(SegmentOracle), 1, 1.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cantor_piecewise_matches_quadrature() {
        let c = FractalString::cantor();
        for k in 1..=3 {
            let t = 1.0 / 18.0;
            let exact = primitive_tube(&c, k, t).unwrap();
            let quad = primitive_tube(&Opaque(c.clone()), k, t).unwrap();
            assert!((exact - quad).abs() <= 1e-10 * exact.abs(), "k={k}: {exact} vs {quad}");
        }
    }
}
