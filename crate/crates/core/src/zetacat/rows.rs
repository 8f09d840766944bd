use crate::complexcore::C;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// coef · e^{βω} · Π(ω − numer) / Π(ω − denom), one summand of a row residue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowTerm {
    pub coef: C,
    pub beta: f64,
    pub numer: Vec<C>,
    pub denom: Vec<C>,
}

impl RowTerm {
    pub fn new(coef: C, beta: f64, numer: Vec<C>, denom: Vec<C>) -> Self {
        RowTerm { coef, beta, numer, denom }
    }

    pub fn eval(&self, w: C) -> C {
        let mut v = self.coef * (self.beta * w).exp();
        for n in &self.numer {
            v *= w - n;
        }
        for d in &self.denom {
            v /= w - d;
        }
        v
    }
}

/// Closed-form residues along a vertical row ω_k = re + i(im0 + k·period).
///
/// Indices in `excluded` are not simple poles of the row type (a coincidence
/// with another singularity) and are handled as isolated points instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowModel {
    pub re: f64,
    pub im0: f64,
    pub period: f64,
    pub excluded: Vec<i64>,
    pub terms: Vec<RowTerm>,
}

impl RowModel {
    pub fn omega(&self, k: i64) -> C {
        C::new(self.re, self.im0 + k as f64 * self.period)
    }

    pub fn residue(&self, k: i64) -> C {
        let w = self.omega(k);
        self.terms.iter().map(|t| t.eval(w)).sum()
    }

    /// Index range with |Im ω_k| ≤ x.
    pub fn index_range(&self, x: f64) -> (i64, i64) {
        let x = x * (1.0 + 1e-12);
        let lo = ((-x - self.im0) / self.period).ceil() as i64;
        let hi = ((x - self.im0) / self.period).floor() as i64;
        (lo, hi)
    }

    /// Multiply every residue by g(ω) = e^{β'ω}·Π(ω − numer)/Π(ω − denom).
    pub fn transformed(&self, factor: C, beta: f64, numer: &[C], denom: &[C]) -> RowModel {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut n = t.numer.clone();
                n.extend_from_slice(numer);
                let mut d = t.denom.clone();
                d.extend_from_slice(denom);
                RowTerm::new(t.coef * factor, t.beta + beta, n, d)
            })
            .collect();
        RowModel { terms, ..self.clone() }
    }
}

/// Partial fractions of Π(ω − numer)/Π(ω − denom) after cancelling common roots.
///
/// Returns (pole, weight) pairs. Fails when the fraction is not proper or a pole repeats.
pub fn partial_fractions(numer: &[C], denom: &[C]) -> Result<Vec<(C, C)>> {
    let mut n: Vec<C> = numer.to_vec();
    let mut d: Vec<C> = Vec::new();
    for &p in denom {
        if let Some(i) = n.iter().position(|q| (q - p).norm() < 1e-12) {
            n.swap_remove(i);
        } else {
            d.push(p);
        }
    }
    if n.len() >= d.len() {
        return Err(Error::Parameter("row kernel is not a proper fraction".into()));
    }
    for i in 0..d.len() {
        for j in 0..i {
            if (d[i] - d[j]).norm() < 1e-12 {
                return Err(Error::Parameter("row kernel has a repeated pole".into()));
            }
        }
    }
    Ok(d.iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut w = C::new(1.0, 0.0);
            for q in &n {
                w *= p - q;
            }
            for (j, r) in d.iter().enumerate() {
                if j != i {
                    w /= p - r;
                }
            }
            (p, w)
        })
        .collect())
}

/// Σ_{k∈ℤ, k∉skip} e^{ω_k X}/(ω_k − z) for ω_k = ω₀ + ikp, as a symmetric limit.
pub fn lattice_sum(omega0: C, period: f64, z: C, x: f64, skip: &[i64]) -> Result<C> {
    let big_p = 2.0 * std::f64::consts::PI / period;
    let c = omega0 - z;
    let m = c.im / period;
    let on_lattice = c.re.abs() < 1e-12 && (m - m.round()).abs() < 1e-9;
    let frac = x - big_p * (x / big_p).floor();
    let at_jump = frac < 1e-13 * big_p || big_p - frac < 1e-13 * big_p;
    let mut sum = if on_lattice {
        let k0 = -(m.round() as i64);
        if !skip.contains(&k0) {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        let saw = if at_jump { C::new(0.0, 0.0) } else { C::new(big_p / 2.0 - frac, 0.0) };
        (z * x).exp() * saw
    } else {
        let denom = 1.0 - (-c * big_p).exp();
        let body = if at_jump {
            0.5 * (omega0 * x).exp() * (1.0 + (-c * big_p).exp())
        } else {
            (omega0 * x - c * frac).exp()
        };
        body * big_p / denom
    };
    for &k in skip {
        let w = omega0 + C::new(0.0, k as f64 * period);
        if (w - z).norm() > 1e-12 {
            sum -= (w * x).exp() / (w - z);
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(omega0: C, p: f64, z: C, x: f64, skip: &[i64], n: i64) -> C {
        // symmetric partial sums converge like 1/n; average two cut-offs to sharpen
        let s = |n: i64| -> C {
            (-n..=n)
                .filter(|k| !skip.contains(k))
                .map(|k| {
                    let w = omega0 + C::new(0.0, k as f64 * p);
                    (w * x).exp() / (w - z)
                })
                .sum()
        };
        0.5 * (s(n) + s(n + 1))
    }

    #[test]
    fn generic_lattice_sum() {
        let (w0, p, z, x) = (C::new(0.63, 0.0), 5.7, C::new(0.0, 0.0), 1.3);
        let got = lattice_sum(w0, p, z, x, &[]).unwrap();
        let b = brute(w0, p, z, x, &[], 200000);
        assert!((got - b).norm() < 1e-5, "{got} vs {b}");
    }

    #[test]
    fn lattice_point_is_skipped() {
        let (w0, p, z, x) = (C::new(1.0, 0.0), 9.06, C::new(1.0, 0.0), 2.0);
        let got = lattice_sum(w0, p, z, x, &[0]).unwrap();
        let b = brute(w0, p, z, x, &[0], 200000);
        assert!((got - b).norm() < 1e-5, "{got} vs {b}");
        let got = lattice_sum(w0, p, C::new(0.2, 0.0), x, &[0, 3]).unwrap();
        let b = brute(w0, p, C::new(0.2, 0.0), x, &[0, 3], 200000);
        assert!((got - b).norm() < 1e-5, "{got} vs {b}");
    }

    #[test]
    fn fractions() {
        // (ω−2)/((ω−1)(ω−3)) = (1/2)/(ω−1) + (1/2)/(ω−3)
        let pf = partial_fractions(&[C::new(2.0, 0.0)], &[C::new(1.0, 0.0), C::new(3.0, 0.0)]).unwrap();
        assert!((pf[0].1 - C::new(0.5, 0.0)).norm() < 1e-15);
        assert!((pf[1].1 - C::new(0.5, 0.0)).norm() < 1e-15);
        assert!(partial_fractions(&[C::new(2.0, 0.0)], &[C::new(2.0, 0.0)]).is_err());
    }
}
