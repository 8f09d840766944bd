use crate::complexcore::{hurwitz_zeta, C};
use crate::error::{Error, Result};
use crate::geometry::strings::a_string_length;

/// Offset used to average across removable singularities.
pub const REMOVABLE_OFFSET: f64 = 1e-6;

const MAX_DEPTH: usize = 400;

/// Incremental coefficients of (1 + h(x))^{s'}, where ℓ_j = a j^{−a−1}(1 + h(1/j)).
struct Expansion {
    a: f64,
    sp: C,
    binom: Vec<f64>,
    c: Vec<f64>,
    f: Vec<f64>,
    e: Vec<C>,
}

impl Expansion {
    fn new(a: f64, sp: C) -> Self {
        Expansion { a, sp, binom: vec![1.0, -a], c: vec![0.0], f: vec![0.0], e: vec![C::new(1.0, 0.0)] }
    }

    /// e_m, extending the series as needed.
    fn coeff(&mut self, m: usize) -> C {
        while self.e.len() <= m {
            let k = self.e.len();
            // C(−a, k+1), then h_k = −C(−a, k+1)/a
            let n = self.binom.len();
            let next = self.binom[n - 1] * (-self.a - (n - 1) as f64) / n as f64;
            self.binom.push(next);
            self.c.push(-self.binom[k + 1] / self.a);
            // log(1+h): k f_k = k h_k − Σ_{i<k} i f_i h_{k−i}
            let mut acc = k as f64 * self.c[k];
            for i in 1..k {
                acc -= i as f64 * self.f[i] * self.c[k - i];
            }
            self.f.push(acc / k as f64);
            // exp(s' log(1+h)): k e_k = s' Σ_{i≤k} i f_i e_{k−i}
            let mut acc = C::new(0.0, 0.0);
            for i in 1..=k {
                acc += i as f64 * self.f[i] * self.e[k - i];
            }
            self.e.push(acc * self.sp / k as f64);
        }
        self.e[m]
    }
}

/// Σ_j j^b ℓ_j^{s−τ} for the a-string, meromorphically continued.
///
/// A finite head is summed directly; the tail expands (1 + h_j)^{s'} in powers of
/// 1/j and sums each power with a Hurwitz zeta. `depth` is the minimum number of
/// correction terms; more are added until the series has converged.
pub fn zeta_lb(a: f64, b: f64, tau: f64, s: C, depth: usize) -> Result<C> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() || !tau.is_finite() {
        return Err(Error::Parameter(format!("zeta_Lb needs a > 0 and finite b, τ (a={a}, b={b}, τ={tau})")));
    }
    let sp = s - tau;
    let j0 = (2.0 * (a + 1.0) * sp.norm() + 64.0).ceil();
    let mut ex = Expansion::new(a, sp);
    // every candidate pole index must be visited before the series may stop
    let last_pole = (1.0 + b - (a + 1.0) * sp.re).ceil().max(0.0) as usize + 1;
    if last_pole >= MAX_DEPTH {
        return Err(Error::InsufficientDepth { re: s.re, im: s.im });
    }
    let mut head = C::new(0.0, 0.0);
    for j in (1..j0 as u64).rev() {
        let x = j as f64;
        head += (sp * a_string_length(a, x).ln() + b * x.ln()).exp();
    }
    let scale = (sp * a.ln()).exp();
    let mut tail = C::new(0.0, 0.0);
    for m in 0..MAX_DEPTH {
        let em = ex.coeff(m);
        let u = (a + 1.0) * sp - b + m as f64;
        if (u - 1.0).norm() < 1e-10 {
            if em.norm() < 1e-12 {
                let h = C::new(REMOVABLE_OFFSET, 0.0);
                return Ok(0.5 * (zeta_lb(a, b, tau, s + h, depth)? + zeta_lb(a, b, tau, s - h, depth)?));
            }
            return Err(Error::Pole { re: s.re, im: s.im });
        }
        let term = if em.norm() == 0.0 { C::new(0.0, 0.0) } else { em * hurwitz_zeta(u, j0)? };
        tail += term;
        let sc = scale.norm();
        if m >= depth.max(last_pole) && term.norm() * sc <= 1e-16 * (sc * tail.norm() + head.norm()).max(1e-300) {
            let v = head + scale * tail;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite("zeta_Lb".into()));
            }
            return Ok(v);
        }
    }
    Err(Error::InsufficientDepth { re: s.re, im: s.im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexcore::riemann_zeta;

    #[test]
    fn harmonic_string_expansion() {
        // a = 1: ℓ_j = 1/(j(j+1)), so Σ_{j≥2} ℓ_j^s = Σ_m C(−s,m) (ζ(2s+m) − 1)
        let s = C::new(0.8, 0.3);
        let mut expect = (-s * 2f64.ln()).exp();
        let mut binom = C::new(1.0, 0.0);
        for m in 0..80 {
            expect += binom * (riemann_zeta(2.0 * s + m as f64).unwrap() - 1.0);
            binom *= (-s - m as f64) / (m as f64 + 1.0);
        }
        let got = zeta_lb(1.0, 0.0, 0.0, s, 8).unwrap();
        assert!((got - expect).norm() < 1e-11 * expect.norm(), "{got} vs {expect}");
    }

    #[test]
    fn direct_sum_in_convergence_region() {
        let (a, b, s) = (0.7, 0.3, C::new(2.5, 1.0));
        let mut direct = C::new(0.0, 0.0);
        for j in (1..400000u64).rev() {
            let x = j as f64;
            direct += (s * a_string_length(a, x).ln() + b * x.ln()).exp();
        }
        let got = zeta_lb(a, b, 0.0, s, 8).unwrap();
        assert!((got - direct).norm() < 1e-9, "{got} vs {direct}");
    }

    #[test]
    fn value_at_tau_for_noninteger_b() {
        let (a, b, tau) = (1.5, 0.4, 1.0);
        let v = zeta_lb(a, b, tau, C::new(tau, 0.0), 8).unwrap();
        let z = riemann_zeta(C::new(-b, 0.0)).unwrap();
        assert!((v - z).norm() < 1e-9);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(zeta_lb(1.0, 0.0, 0.0, C::new(0.5, 0.0), 8), Err(Error::Pole { .. })));
    }
}
