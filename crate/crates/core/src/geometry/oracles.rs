use super::strings::{a_string_first_below, a_string_length};
use super::TubeOracle;
use crate::error::{Error, Result};
use crate::quad::adaptive;

/// V(t) = Σ c_i t^i, e.g. the outer neighbourhood of a convex body.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialOracle {
    pub coeffs: Vec<f64>,
}

impl TubeOracle for PolynomialOracle {
    fn volume(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
    fn exact_primitive(&self, k: usize, t: f64) -> Option<f64> {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut w = 1.0;
            for j in 1..=k {
                w /= (i + j) as f64;
            }
            acc += c * w * t.powi((i + k) as i32);
        }
        Some(acc)
    }
}

/// The unit segment in the line: |I_t| = 2t + 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentOracle;

impl TubeOracle for SegmentOracle {
    fn volume(&self, t: f64) -> f64 {
        if t > 0.0 {
            2.0 * t + 1.0
        } else {
            1.0
        }
    }
    fn exact_primitive(&self, k: usize, t: f64) -> Option<f64> {
        PolynomialOracle { coeffs: vec![1.0, 2.0] }.exact_primitive(k, t)
    }
}

/// Sum of independent pieces, e.g. inner spray plus outer neighbourhood.
pub struct SumOracle {
    pub parts: Vec<Box<dyn TubeOracle>>,
}

impl TubeOracle for SumOracle {
    fn volume(&self, t: f64) -> f64 {
        self.parts.iter().map(|p| p.volume(t)).sum()
    }
    fn omega_volume(&self) -> Option<f64> {
        self.parts.iter().map(|p| p.omega_volume()).sum()
    }
    fn exact_primitive(&self, k: usize, t: f64) -> Option<f64> {
        self.parts.iter().map(|p| p.exact_primitive(k, t)).sum()
    }
    fn kinks(&self, t: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.parts.iter().flat_map(|p| p.kinks(t)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

/// Cantor graph subdrum: Σ_{k≥1} 2^k 9^{−k} v(3^k t) with v(τ) = τ − τ²/2 up to τ = 1.
pub fn cantor_graph_tube_volume(t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut w = 2.0 / 9.0;
    let mut tau = 3.0 * t;
    while tau < 1.0 {
        acc += w * (tau - 0.5 * tau * tau);
        w *= 2.0 / 9.0;
        tau *= 3.0;
    }
    // saturated triangles: Σ_{j≥k} (2/9)^j / 2
    acc + w * 9.0 / 14.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorGraphOracle;

impl TubeOracle for CantorGraphOracle {
    fn volume(&self, t: f64) -> f64 {
        cantor_graph_tube_volume(t)
    }
    fn omega_volume(&self) -> Option<f64> {
        Some(1.0 / 7.0)
    }
    fn kinks(&self, t: f64) -> Vec<f64> {
        let mut v = Vec::new();
        let mut x = 1.0 / 3.0;
        while x > t * 1e-6 {
            if x < t {
                v.push(x);
            }
            x /= 3.0;
        }
        v.reverse();
        v
    }
}

/// Concentric circles of radii j^{−a} inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalNestOracle {
    pub a: f64,
}

impl FractalNestOracle {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Parameter(format!("nest needs a > 0, got {a}")));
        }
        Ok(FractalNestOracle { a })
    }
}

impl TubeOracle for FractalNestOracle {
    fn volume(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let a = self.a;
        // annuli j < J have width ℓ_j > 2t and contribute 2πt(r_j + r_{j+1})
        let jj = a_string_first_below(a, 2.0 * t);
        let n = jj as u64;
        let mut s = 0.0;
        let mut c = 0.0;
        for j in (1..n).rev() {
            let y = (j as f64).powf(-a) - c;
            let z = s + y;
            c = (z - s) - y;
            s = z;
        }
        let rj = jj.powf(-a);
        let pi = std::f64::consts::PI;
        2.0 * pi * t * (2.0 * s - 1.0 + rj) + pi * rj * rj
    }
    fn omega_volume(&self) -> Option<f64> {
        Some(std::f64::consts::PI)
    }
}

/// Circles of radii a^k, k ≥ 0, measured in the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarNestOracle {
    pub a: f64,
}

impl SelfSimilarNestOracle {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Parameter(format!("self-similar nest needs 0 < a < 1, got {a}")));
        }
        Ok(SelfSimilarNestOracle { a })
    }
}

impl TubeOracle for SelfSimilarNestOracle {
    fn volume(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let pi = std::f64::consts::PI;
        let a = self.a;
        let mut acc = pi * t * (2.0 + t);
        let mut r = 1.0;
        while r * (1.0 - a) > 2.0 * t {
            acc += 2.0 * pi * t * r * (1.0 + a);
            r *= a;
        }
        acc + pi * r * r
    }
}

/// Rectangles R_j of base ℓ_j (the 1/β-string) and height j^{−α/β}; only the vertical sides lie in A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpOracle {
    pub alpha: f64,
    pub beta: f64,
    omega: f64,
}

impl ChirpOracle {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha < 0.0 && beta > 0.0) {
            return Err(Error::Parameter(format!("chirp needs -1 < α < 0 < β, got α={alpha}, β={beta}")));
        }
        let mut o = ChirpOracle { alpha, beta, omega: 0.0 };
        o.omega = o.area()?;
        Ok(o)
    }

    fn base(&self, j: f64) -> f64 {
        a_string_length(1.0 / self.beta, j)
    }

    fn height(&self, j: f64) -> f64 {
        j.powf(-self.alpha / self.beta)
    }

    fn area(&self) -> Result<f64> {
        const J1: u64 = 20000;
        let mut s = 0.0;
        for j in (1..J1).rev() {
            let x = j as f64;
            s += self.height(x) * self.base(x);
        }
        let f = |x: f64| self.height(x) * self.base(x);
        let j1 = J1 as f64;
        // Euler–Maclaurin tail with the integral taken in log scale
        let rate = (1.0 + self.alpha) / self.beta;
        let ymax = (40.0 / rate).max(10.0);
        let integral = adaptive(&|y: f64| {
            let x = j1 * y.exp();
            f(x) * x
        }, 0.0, ymax, 1e-16, 1e-13)?;
        let hd = 1e-3 * j1;
        let fp = (f(j1 + hd) - f(j1 - hd)) / (2.0 * hd);
        Ok(s + integral + 0.5 * f(j1) - fp / 12.0)
    }
}

impl TubeOracle for ChirpOracle {
    fn volume(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let jj = a_string_first_below(1.0 / self.beta, 2.0 * t) as u64;
        let (mut hs, mut hb) = (0.0, 0.0);
        for j in 1..jj {
            let x = j as f64;
            let h = self.height(x);
            hs += h;
            hb += h * self.base(x);
        }
        2.0 * t * hs + (self.omega - hb)
    }
    fn omega_volume(&self) -> Option<f64> {
        Some(self.omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_graph_saturates_at_one_seventh() {
        assert!((cantor_graph_tube_volume(0.5) - 1.0 / 7.0).abs() < 1e-16);
        assert!((cantor_graph_tube_volume(1.0 / 3.0) - 1.0 / 7.0).abs() < 1e-16);
        let t = 1e-12;
        assert!((cantor_graph_tube_volume(t) / t - 2.0).abs() < 1e-3);
    }

    #[test]
    fn nest_saturates_to_disk() {
        let o = FractalNestOracle::new(1.0).unwrap();
        assert!((o.volume(10.0) - std::f64::consts::PI).abs() < 1e-14);
        // brute force over annuli at a moderate t
        let t = 0.01;
        let pi = std::f64::consts::PI;
        let mut v = 0.0;
        for j in 1..100000u64 {
            let (r0, r1) = ((j as f64).recip(), ((j + 1) as f64).recip());
            v += if r0 - r1 <= 2.0 * t { pi * (r0 * r0 - r1 * r1) } else { 2.0 * pi * t * (r0 + r1) };
        }
        v += pi * 1e-10;
        assert!((o.volume(t) - v).abs() < 1e-10);
    }

    #[test]
    fn chirp_area_converges() {
        // α/β = −1/2 with β = 1: Σ j^{1/2}/(j(j+1)) directly to 4e6 plus a crude tail
        let o = ChirpOracle::new(-0.5, 1.0).unwrap();
        let n = 4_000_000u64;
        let mut s = 0.0;
        for j in (1..n).rev() {
            let x = j as f64;
            s += x.sqrt() / (x * (x + 1.0));
        }
        s += 2.0 / (n as f64).sqrt();
        assert!((o.omega_volume().unwrap() - s).abs() < 1e-6);
    }
}
