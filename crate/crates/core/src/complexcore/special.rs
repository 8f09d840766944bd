use super::C;
use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k}/(2k)! for k = 1..=20.
const B2K_OVER_FACT: [f64; 20] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_767e-7,
    2.087_675_698_786_810e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_229e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_724_395_202_645e-26,
    1.455_172_475_614_865e-27,
    -3.685_994_940_665_310e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_630e-32,
];

pub(crate) fn check(v: C, what: &str) -> Result<C> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// log sin(z), stable for large |Im z|. Any branch of the logarithm.
fn ln_sin(z: C) -> C {
    let i = C::i();
    if z.im.abs() < 20.0 {
        return z.sin().ln();
    }
    if z.im > 0.0 {
        -i * z + (((2.0 * i * z).exp() - 1.0) / (2.0 * i)).ln()
    } else {
        i * z + ((1.0 - (-2.0 * i * z).exp()) / (2.0 * i)).ln()
    }
}

fn is_nonpositive_integer(z: C) -> bool {
    z.im == 0.0 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-14
}

/// log Γ(z) (branch unspecified; exponentiate for Γ).
pub fn ln_gamma(z: C) -> Result<C> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        let v = C::new(PI.ln(), 0.0) - ln_sin(PI * z) - ln_gamma(1.0 - z)?;
        return check(v, "ln_gamma");
    }
    let z = z - 1.0;
    let mut x = C::new(LANCZOS[0], 0.0);
    for (i, p) in LANCZOS.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let v = 0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln();
    check(v, "ln_gamma")
}

/// Γ(z) for complex z.
pub fn gamma(z: C) -> Result<C> {
    if z.im == 0.0 && z.re > 0.0 && z.re < 171.0 && z.re == z.re.round() {
        let mut acc = 1.0;
        for k in 2..(z.re as u32) {
            acc *= k as f64;
        }
        return Ok(C::new(acc, 0.0));
    }
    check(ln_gamma(z)?.exp(), "gamma")
}

/// Pochhammer symbol (s)_k = Γ(s+k)/Γ(s).
pub fn pochhammer(s: C, k: i64) -> Result<C> {
    let mut acc = C::new(1.0, 0.0);
    if k >= 0 {
        for j in 0..k {
            acc *= s + j as f64;
        }
        return check(acc, "pochhammer");
    }
    for j in 1..=(-k) {
        let f = s - j as f64;
        if f.norm() < 1e-14 {
            return Err(Error::GammaPole((s + k as f64).re));
        }
        acc /= f;
    }
    check(acc, "pochhammer")
}

/// Hurwitz zeta ζ(u, q) for real q > 0 by Euler–Maclaurin summation.
pub fn hurwitz_zeta(u: C, q: f64) -> Result<C> {
    if (u - 1.0).norm() < 1e-12 {
        return Err(Error::Pole { re: u.re, im: u.im });
    }
    if q <= 0.0 {
        return Err(Error::Parameter(format!("hurwitz shift q = {q} must be positive")));
    }
    let target = u.norm() + 2.0 * (-u.re).max(0.0) + 24.0;
    let n_direct = if q >= target { 0 } else { (target - q).ceil() as usize };
    let mut acc = C::new(0.0, 0.0);
    for n in 0..n_direct {
        acc += (-u * (q + n as f64).ln()).exp();
    }
    let a = q + n_direct as f64;
    let ln_a = a.ln();
    let a_pow = (-u * ln_a).exp();
    acc += a_pow * a / (u - 1.0) + 0.5 * a_pow;
    // (u)_{2k-1} a^{-u-2k+1}
    let mut poch = u;
    let mut pw = a_pow / a;
    for (k, b) in B2K_OVER_FACT.iter().enumerate() {
        let term = poch * pw * *b;
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            break;
        }
        let kk = (k + 1) as f64;
        poch *= (u + 2.0 * kk - 1.0) * (u + 2.0 * kk);
        pw /= a * a;
    }
    check(acc, "hurwitz_zeta")
}

fn borwein_eta(s: C) -> C {
    const N: usize = 64;
    let n = N as f64;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0;
    let mut sum = 1.0;
    d[0] = 1.0;
    for i in 1..=N {
        let fi = i as f64;
        term *= (n + fi - 1.0) * 4.0 * (n - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        sum += term;
        d[i] = sum;
    }
    let dn = d[N];
    let mut acc = C::new(0.0, 0.0);
    for k in 0..N {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * (d[k] - dn) / dn;
        acc += w * (-s * ((k + 1) as f64).ln()).exp();
    }
    -acc
}

/// Riemann zeta function, meromorphically continued.
pub fn riemann_zeta(s: C) -> Result<C> {
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    if s.re < -2.0 {
        if is_nonpositive_integer(s / 2.0) {
            return Ok(C::new(0.0, 0.0));
        }
        let w = 1.0 - s;
        let zw = riemann_zeta(w)?;
        if zw.norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        let ln = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(w)? + zw.ln();
        let sn = PI * s / 2.0;
        return check((ln + ln_sin(sn)).exp(), "riemann_zeta");
    }
    let denom = 1.0 - (C::new(2f64.ln(), 0.0) * (1.0 - s)).exp();
    if s.im.abs() <= 20.0 && denom.norm() > 0.1 {
        return check(borwein_eta(s) / denom, "riemann_zeta");
    }
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        let z2 = riemann_zeta(C::new(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-13);
        let z0 = riemann_zeta(C::new(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-13);
        let zm1 = riemann_zeta(C::new(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-13);
        let zm3 = riemann_zeta(C::new(-3.0, 0.0)).unwrap();
        assert!((zm3.re - 1.0 / 120.0).abs() < 1e-13);
        assert!(riemann_zeta(C::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn branches_agree() {
        for s in [C::new(0.7, 3.0), C::new(-1.5, 15.0), C::new(2.5, -19.0), C::new(0.3, 0.2)] {
            let b = riemann_zeta(s).unwrap();
            let h = hurwitz_zeta(s, 1.0).unwrap();
            assert!((b - h).norm() < 1e-11 * b.norm().max(1.0), "{s}: {b} vs {h}");
        }
        let s = C::new(-2.5, 4.0);
        let r = riemann_zeta(s).unwrap();
        let h = hurwitz_zeta(s, 1.0).unwrap();
        // the direct sum cancels heavily left of the critical strip
        assert!((r - h).norm() < 1e-9 * r.norm());
    }

    #[test]
    fn first_nontrivial_zero() {
        let z = riemann_zeta(C::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-10);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(C::new(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
        assert!((gamma(C::new(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-13);
        let g = gamma(C::new(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!(gamma(C::new(-2.0, 0.0)).is_err());
    }

    #[test]
    fn pochhammer_small() {
        assert_eq!(pochhammer(C::new(2.0, 0.0), 3).unwrap(), C::new(24.0, 0.0));
        assert_eq!(pochhammer(C::new(0.3, 1.0), 0).unwrap(), C::new(1.0, 0.0));
        assert!((pochhammer(C::new(3.0, 0.0), -1).unwrap().re - 0.5).abs() < 1e-15);
        assert!(pochhammer(C::new(2.0, 0.0), -2).is_err());
    }
}
