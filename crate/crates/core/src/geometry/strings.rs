use super::spray::scaling_levels;
use super::TubeOracle;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How the lengths ℓ_j of a string are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LengthRule {
    Cantor,
    AString { a: f64 },
    /// Gap lengths g_i scaled by every word in the ratios.
    SelfSimilar { ratios: Vec<f64>, gaps: Vec<f64> },
    Explicit { lengths: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalString {
    pub length_rule: LengthRule,
    pub total_length: f64,
}

impl FractalString {
    pub fn new(rule: LengthRule) -> Result<Self> {
        let total = match &rule {
            LengthRule::Cantor => 1.0,
            LengthRule::AString { a } => {
                if !(*a > 0.0) || !a.is_finite() {
                    return Err(Error::Parameter(format!("a-string needs a > 0, got {a}")));
                }
                1.0
            }
            LengthRule::SelfSimilar { ratios, gaps } => {
                if ratios.is_empty() || gaps.is_empty() {
                    return Err(Error::Parameter("self-similar string needs ratios and gaps".into()));
                }
                if ratios.iter().any(|r| !(*r > 0.0 && *r < 1.0)) || gaps.iter().any(|g| !(*g > 0.0)) {
                    return Err(Error::Parameter("ratios must lie in (0,1) and gaps be positive".into()));
                }
                let sr: f64 = ratios.iter().sum();
                if sr >= 1.0 {
                    return Err(Error::Divergent(format!("sum of ratios {sr} >= 1 gives infinite length")));
                }
                gaps.iter().sum::<f64>() / (1.0 - sr)
            }
            LengthRule::Explicit { lengths } => {
                if lengths.is_empty() || lengths.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
                    return Err(Error::Parameter("explicit lengths must be positive and finite".into()));
                }
                lengths.iter().sum()
            }
        };
        Ok(FractalString { length_rule: rule, total_length: total })
    }

    pub fn cantor() -> Self {
        FractalString { length_rule: LengthRule::Cantor, total_length: 1.0 }
    }

    pub fn a_string(a: f64) -> Result<Self> {
        Self::new(LengthRule::AString { a })
    }

    /// Every length scaled by λ.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let rule = match &self.length_rule {
            LengthRule::Cantor => LengthRule::SelfSimilar { ratios: vec![1.0 / 3.0; 2], gaps: vec![lambda / 3.0] },
            LengthRule::SelfSimilar { ratios, gaps } => {
                LengthRule::SelfSimilar { ratios: ratios.clone(), gaps: gaps.iter().map(|g| g * lambda).collect() }
            }
            LengthRule::Explicit { lengths } => LengthRule::Explicit { lengths: lengths.iter().map(|l| l * lambda).collect() },
            LengthRule::AString { .. } => {
                return Err(Error::Parameter("scaling an a-string leaves the catalog family".into()))
            }
        };
        Self::new(rule)
    }

    fn self_similar(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.length_rule {
            LengthRule::Cantor => Some((vec![1.0 / 3.0; 2], vec![1.0 / 3.0])),
            LengthRule::SelfSimilar { ratios, gaps } => Some((ratios.clone(), gaps.clone())),
            _ => None,
        }
    }
}

/// ℓ_j = j^{-a} − (j+1)^{-a} without cancellation.
pub fn a_string_length(a: f64, j: f64) -> f64 {
    -j.powf(-a) * (-a * (1.0 / j).ln_1p()).exp_m1()
}

/// Smallest j ≥ 1 with ℓ_j ≤ x for the a-string.
pub(crate) fn a_string_first_below(a: f64, x: f64) -> f64 {
    if a_string_length(a, 1.0) <= x {
        return 1.0;
    }
    let mut hi = ((a / x).powf(1.0 / (a + 1.0))).max(2.0).ceil();
    while a_string_length(a, hi) > x {
        hi *= 2.0;
    }
    let mut lo = 1.0;
    // lo has ℓ > x, hi has ℓ ≤ x
    while hi - lo > 1.0 {
        let mid = ((lo + hi) * 0.5).floor();
        if a_string_length(a, mid) > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// V(t) = Σ_j min(ℓ_j, 2t).
pub fn string_tube_volume(string: &FractalString, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    match &string.length_rule {
        LengthRule::AString { a } => {
            let j = a_string_first_below(*a, 2.0 * t);
            2.0 * t * (j - 1.0) + j.powf(-a)
        }
        LengthRule::Explicit { lengths } => lengths.iter().map(|l| l.min(2.0 * t)).sum(),
        _ => {
            let (ratios, gaps) = string.self_similar().unwrap();
            let total: f64 = 1.0 / (1.0 - ratios.iter().sum::<f64>());
            // short lengths are summed through their maximal ancestors, each
            // heading a scaled copy of the whole string
            gaps.iter()
                .map(|&g| {
                    if g <= 2.0 * t {
                        return g * total;
                    }
                    let (mut count, mut short) = (0.0, 0.0);
                    for (lam, mult) in scaling_levels(&ratios, 2.0 * t / g) {
                        if g * lam > 2.0 * t {
                            count += mult;
                            for &r in &ratios {
                                if g * lam * r <= 2.0 * t {
                                    short += mult * lam * r;
                                }
                            }
                        }
                    }
                    2.0 * t * count + g * total * short
                })
                .sum()
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// k-th primitive of min(ℓ, 2t).
fn piece_primitive(l: f64, k: usize, t: f64) -> f64 {
    let f = factorial(k + 1);
    if l >= 2.0 * t {
        2.0 * t.powi(k as i32 + 1) / f
    } else {
        2.0 * (t.powi(k as i32 + 1) - (t - 0.5 * l).powi(k as i32 + 1)) / f
    }
}

impl TubeOracle for FractalString {
    fn volume(&self, t: f64) -> f64 {
        string_tube_volume(self, t)
    }

    fn omega_volume(&self) -> Option<f64> {
        Some(self.total_length)
    }

    fn exact_primitive(&self, k: usize, t: f64) -> Option<f64> {
        if k == 0 {
            return Some(string_tube_volume(self, t));
        }
        match &self.length_rule {
            LengthRule::AString { .. } => None,
            LengthRule::Explicit { lengths } => Some(lengths.iter().map(|&l| piece_primitive(l, k, t)).sum()),
            _ => {
                let (ratios, gaps) = self.self_similar().unwrap();
                let kp = k + 1;
                let f = factorial(kp);
                let mut acc = 0.0;
                for &g in &gaps {
                    let levels = scaling_levels(&ratios, 2.0 * t / g);
                    let mut count = 0.0;
                    // head[i] = Σ over unsaturated words of mult·λ^i
                    let mut head = vec![0.0; kp + 1];
                    for &(lam, mult) in &levels {
                        if g * lam > 2.0 * t {
                            count += mult;
                            for (i, h) in head.iter_mut().enumerate() {
                                *h += mult * lam.powi(i as i32);
                            }
                        }
                    }
                    acc += count * 2.0 * t.powi(kp as i32) / f;
                    // saturated words: 2/(k+1)! Σ_i C(k+1,i) t^{k+1-i} (-1)^{i+1} (ℓ/2)^i
                    for i in 1..=kp {
                        let all = 1.0 / (1.0 - ratios.iter().map(|r| r.powi(i as i32)).sum::<f64>());
                        let tail = g.powi(i as i32) * (all - head[i]);
                        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                        acc += 2.0 / f * binomial(kp, i) * t.powi((kp - i) as i32) * sign * 0.5f64.powi(i as i32) * tail;
                    }
                }
                Some(acc)
            }
        }
    }

    fn kinks(&self, t: f64) -> Vec<f64> {
        let floor = t * 1e-6;
        let mut out: Vec<f64> = match &self.length_rule {
            LengthRule::AString { a } => {
                let mut v = Vec::new();
                let mut j = 1.0;
                loop {
                    let h = 0.5 * a_string_length(*a, j);
                    if h < floor || v.len() > 4096 {
                        break;
                    }
                    if h < t {
                        v.push(h);
                    }
                    j += 1.0;
                }
                v
            }
            LengthRule::Explicit { lengths } => lengths.iter().map(|l| 0.5 * l).filter(|h| *h < t && *h > floor).collect(),
            _ => {
                let (ratios, gaps) = self.self_similar().unwrap();
                let mut v = Vec::new();
                for g in gaps {
                    for (lam, _) in scaling_levels(&ratios, 2.0 * floor / g) {
                        let h = 0.5 * g * lam;
                        if h < t && h > floor {
                            v.push(h);
                        }
                    }
                }
                v
            }
        };
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_values() {
        let c = FractalString::cantor();
        assert!((string_tube_volume(&c, 1.0 / 6.0) - 1.0).abs() < 1e-15);
        assert!((string_tube_volume(&c, 1.0 / 18.0) - 7.0 / 9.0).abs() < 1e-15);
        assert!((string_tube_volume(&c, 3.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn a_string_index_search() {
        for &a in &[0.5, 1.0, 2.0] {
            for &x in &[0.3, 1e-3, 1e-7] {
                let j = a_string_first_below(a, x);
                assert!(a_string_length(a, j) <= x);
                assert!(j == 1.0 || a_string_length(a, j - 1.0) > x);
            }
        }
    }

    #[test]
    fn a_string_against_brute_force() {
        let s = FractalString::a_string(1.0).unwrap();
        let t = 0.003;
        let brute: f64 = (1..200000).map(|j| a_string_length(1.0, j as f64).min(2.0 * t)).sum::<f64>() + 1.0 / 200000.0;
        assert!((string_tube_volume(&s, t) - brute).abs() < 1e-12);
    }

    #[test]
    fn primitive_of_explicit_matches_piecewise_integral() {
        let s = FractalString::new(LengthRule::Explicit { lengths: vec![0.5, 0.2] }).unwrap();
        // ∫_0^0.2 min(0.5,2u)+min(0.2,2u) du = 0.04 + (0.01 + 0.02)
        assert!((s.exact_primitive(1, 0.2).unwrap() - 0.07).abs() < 1e-15);
    }
}
