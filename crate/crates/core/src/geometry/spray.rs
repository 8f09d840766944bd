use super::TubeOracle;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Self-similar spray with a monophase generator G of inradius g.
///
/// For τ < g the inner tube of G is Σ_{i<N} κ_i τ^{N−i}; beyond that it is |G|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSpray {
    pub ratios: Vec<f64>,
    pub kappa: Vec<f64>,
    pub generator_volume: f64,
    pub inradius: f64,
    pub ambient_dim: usize,
}

impl SelfSimilarSpray {
    pub fn new(ratios: Vec<f64>, kappa: Vec<f64>, generator_volume: f64, inradius: f64, ambient_dim: usize) -> Result<Self> {
        if ambient_dim == 0 || kappa.len() != ambient_dim {
            return Err(Error::Parameter(format!("need κ_0..κ_{{N-1}} for N = {ambient_dim}, got {} values", kappa.len())));
        }
        if ratios.is_empty() || ratios.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::Parameter("spray ratios must lie in (0,1)".into()));
        }
        if !(inradius > 0.0) || !(generator_volume > 0.0) {
            return Err(Error::Parameter("inradius and generator volume must be positive".into()));
        }
        let s: f64 = ratios.iter().map(|r| r.powi(ambient_dim as i32)).sum();
        if s >= 1.0 {
            return Err(Error::Divergent(format!("sum of r^N = {s} >= 1")));
        }
        Ok(SelfSimilarSpray { ratios, kappa, generator_volume, inradius, ambient_dim })
    }

    /// Inner tube volume of the generator.
    pub fn generator_tube(&self, tau: f64) -> f64 {
        if tau >= self.inradius {
            return self.generator_volume;
        }
        let n = self.ambient_dim as i32;
        self.kappa.iter().enumerate().map(|(i, k)| k * tau.powi(n - i as i32)).sum()
    }

    /// Σ_j r_j^N.
    pub fn mass_ratio(&self) -> f64 {
        self.ratios.iter().map(|r| r.powi(self.ambient_dim as i32)).sum()
    }

    pub fn total_volume(&self) -> f64 {
        self.generator_volume / (1.0 - self.mass_ratio())
    }

    /// The Cantor string written as a spray on (0, 1/3).
    pub fn cantor_string() -> Self {
        SelfSimilarSpray::new(vec![1.0 / 3.0; 2], vec![2.0], 1.0 / 3.0, 1.0 / 6.0, 1).unwrap()
    }

    /// Inner part of the Sierpiński gasket: an inverted triangle of side 1/2.
    pub fn gasket() -> Self {
        let r3 = 3f64.sqrt();
        SelfSimilarSpray::new(vec![0.5; 3], vec![-3.0 * r3, 1.5], r3 / 16.0, 1.0 / (4.0 * r3), 2).unwrap()
    }

    /// Inner part of the 1/2-square: two squares of side 1/2.
    pub fn half_square() -> Self {
        SelfSimilarSpray::new(vec![0.5; 2], vec![-8.0, 4.0], 0.5, 0.25, 2).unwrap()
    }
}

/// Distinct products λ of the ratios with λ ≥ floor, paired with the number of words giving λ.
pub fn scaling_levels(ratios: &[f64], floor: f64) -> Vec<(f64, f64)> {
    let mut distinct: Vec<(f64, f64)> = Vec::new();
    for &r in ratios {
        match distinct.iter_mut().find(|(q, _)| (q - r).abs() <= 1e-14 * r) {
            Some(e) => e.1 += 1.0,
            None => distinct.push((r, 1.0)),
        }
    }
    let mut out = Vec::new();
    if !(floor > 0.0) {
        return out;
    }
    fn walk(d: &[(f64, f64)], idx: usize, lam: f64, used: u32, weight: f64, floor: f64, out: &mut Vec<(f64, f64)>) {
        if idx == d.len() {
            out.push((lam, weight));
            return;
        }
        let (r, c) = d[idx];
        let (mut l, mut w, mut m) = (lam, weight, 0u32);
        // weight picks up C(used + m, m) · c^m
        while l >= floor * (1.0 - 1e-14) {
            walk(d, idx + 1, l, used + m, w, floor, out);
            m += 1;
            l *= r;
            w *= c * (used + m) as f64 / m as f64;
        }
    }
    walk(&distinct, 0, 1.0, 0, 1.0, floor, &mut out);
    out
}

/// V(t) = Σ_words λ^N V_G(t/λ), exact.
///
/// Words whose copy of G is swallowed (λ·ρ ≤ t) are summed through their
/// maximal ancestors, each carrying a full scaled spray, so small t keeps
/// relative accuracy.
pub fn spray_tube_volume(spray: &SelfSimilarSpray, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let total = spray.total_volume();
    if t >= spray.inradius {
        return total;
    }
    let n = spray.ambient_dim as i32;
    let mut acc = 0.0;
    for (lam, mult) in scaling_levels(&spray.ratios, t / spray.inradius) {
        if lam * spray.inradius > t {
            acc += mult * lam.powi(n) * spray.generator_tube(t / lam);
            for &r in &spray.ratios {
                if lam * r * spray.inradius <= t {
                    acc += mult * (lam * r).powi(n) * total;
                }
            }
        }
    }
    acc
}

impl TubeOracle for SelfSimilarSpray {
    fn volume(&self, t: f64) -> f64 {
        spray_tube_volume(self, t)
    }
    fn omega_volume(&self) -> Option<f64> {
        Some(self.total_volume())
    }
    fn kinks(&self, t: f64) -> Vec<f64> {
        let mut v: Vec<f64> = scaling_levels(&self.ratios, t * 1e-6 / self.inradius)
            .into_iter()
            .map(|(l, _)| l * self.inradius)
            .filter(|k| *k < t)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::strings::{string_tube_volume, FractalString};

    #[test]
    fn word_multiplicities() {
        let lv = scaling_levels(&[0.5, 0.25], 0.2);
        // λ = 1, 1/2, 1/4 (twice: "2" and "11")
        let total: f64 = lv.iter().filter(|(l, _)| (*l - 0.25).abs() < 1e-15).map(|(_, m)| m).sum();
        assert_eq!(total, 2.0);
        let lv = scaling_levels(&[0.5; 3], 0.2);
        let m: f64 = lv.iter().filter(|(l, _)| (*l - 0.25).abs() < 1e-15).map(|(_, m)| m).sum();
        assert_eq!(m, 9.0);
    }

    #[test]
    fn cantor_spray_matches_string() {
        let sp = SelfSimilarSpray::cantor_string();
        let st = FractalString::cantor();
        for &t in &[1.0 / 18.0, 0.01, 0.2, 1e-5] {
            assert!((spray_tube_volume(&sp, t) - string_tube_volume(&st, t)).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn saturation() {
        let sp = SelfSimilarSpray::gasket();
        assert!((spray_tube_volume(&sp, 10.0) - sp.total_volume()).abs() < 1e-15);
        assert!((sp.total_volume() - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }
}
