use super::lb::zeta_lb;
use super::rows::{RowModel, RowTerm};
use super::{pole_or, LanguidityProfile, PoleFamily, ZetaHandle, ZetaKind};
use crate::complexcore::{moran_real_root, riemann_zeta, C};
use crate::error::{Error, Result};
use crate::geometry::spray::SelfSimilarSpray;
use crate::geometry::strings::{a_string_length, LengthRule};
use crate::geometry::{EntryParams, RfdDescriptor};
use crate::quad;
use std::f64::consts::{FRAC_PI_2, PI};

/// Default truncation depth for the a-string continuation.
pub const LB_DEPTH: usize = 8;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

/// b^s for b > 0.
fn pw(b: f64, s: C) -> C {
    (s * b.ln()).exp()
}

struct Meta {
    poles: Vec<PoleFamily>,
    rows: Vec<RowModel>,
    languidity: LanguidityProfile,
    t_max: f64,
    dimension: f64,
    covered: bool,
}

fn handle<F>(d: &RfdDescriptor, meta: Meta, f: F) -> ZetaHandle
where
    F: Fn(C) -> Result<C> + Send + Sync + 'static,
{
    let mut h = ZetaHandle::from_fn(&d.name, ZetaKind::Distance, d.ambient_dim, d.delta, move |s| {
        let v = f(s)?;
        pole_or(v, s)
    });
    h.boundary_volume = Some(d.omega_volume);
    h.omega_covered = meta.covered;
    h.poles = meta.poles;
    h.rows = meta.rows;
    h.languidity = meta.languidity;
    h.t_max = meta.t_max;
    h.dimension_hint = meta.dimension;
    h
}

fn row(re: f64, period: f64, excluded: Vec<i64>, coef: f64, beta: f64, denom: &[f64]) -> RowModel {
    RowModel {
        re,
        im0: 0.0,
        period,
        excluded,
        terms: vec![RowTerm::new(c(coef), beta, vec![], denom.iter().map(|x| c(*x)).collect())],
    }
}

fn row_family(r: &RowModel) -> PoleFamily {
    PoleFamily::Row { re: r.re, im0: r.im0, period: r.period }
}

/// Z(s) = ∫₀^{π/2} (cos φ + sin φ)^{−s} dφ on 64 adaptive panels.
pub fn third_square_z(s: C) -> Result<C> {
    let f = |phi: f64| (-s * (phi.cos() + phi.sin()).ln()).exp();
    let h = FRAC_PI_2 / 64.0;
    let mut acc = C::new(0.0, 0.0);
    for i in 0..64 {
        let a = i as f64 * h;
        acc += quad::adaptive(&f, a, a + h, 1e-300, 1e-11)?;
    }
    Ok(acc)
}

/// Distance zeta function of a catalog entry.
pub fn catalog_zeta(d: &RfdDescriptor) -> Result<ZetaHandle> {
    let r3 = 3f64.sqrt();
    let (ln2, ln3) = (2f64.ln(), 3f64.ln());
    Ok(match d.params.clone() {
        EntryParams::Segment => {
            let delta = d.delta;
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0)],
                rows: vec![],
                languidity: LanguidityProfile::strong(-1.0, 1.0 / delta, 2.0),
                t_max: f64::INFINITY,
                dimension: 0.0,
                covered: false,
            };
            handle(d, meta, move |s| Ok(2.0 * pw(delta, s) / s))
        }
        EntryParams::CantorString => {
            let p = 2.0 * PI / ln3;
            let rw = row(2f64.ln() / ln3, p, vec![], 1.0 / ln3, -ln2, &[0.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-1.0, 2.0, 1.0),
                t_max: 0.5,
                dimension: ln2 / ln3,
                covered: true,
            };
            handle(d, meta, |s| Ok(pw(2.0, 1.0 - s) / (s * (pw(3.0, s) - 2.0))))
        }
        EntryParams::AString { a } => {
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::Arithmetic { start: 1.0 / (a + 1.0), step: 1.0 / (a + 1.0) }],
                rows: vec![],
                languidity: LanguidityProfile::weak(-0.5, a + 1.0),
                t_max: 0.5,
                dimension: 1.0 / (a + 1.0),
                covered: true,
            };
            handle(d, meta, move |s| Ok(pw(2.0, 1.0 - s) * zeta_lb(a, 0.0, 0.0, s, LB_DEPTH)? / s))
        }
        EntryParams::SelfSimilarString { ratios, gaps } => self_similar_string(d, ratios, gaps)?,
        EntryParams::Gasket => {
            let rw = row(3f64.ln() / ln2, 2.0 * PI / ln2, vec![], 2.0 * r3 / ln2, -(2.0 * r3).ln(), &[0.0, 1.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::point(1.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-1.0, 2.0 * r3, 1.0),
                t_max: 1.0 / (2.0 * r3),
                dimension: 3f64.ln() / ln2,
                covered: false,
            };
            handle(d, meta, move |s| {
                let inner = 6.0 * pw(r3, 1.0 - s) * pw(2.0, -s) / (s * (s - 1.0) * (pw(2.0, s) - 3.0));
                Ok(inner + 2.0 * PI / s + 3.0 / (s - 1.0))
            })
        }
        EntryParams::Carpet3 => {
            let rw = row(26f64.ln() / ln3, 2.0 * PI / ln3, vec![], 24.0 / (13.0 * ln3), -ln2, &[0.0, 1.0, 2.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::point(1.0), PoleFamily::point(2.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-1.0, 2.0, 1.0),
                t_max: 0.5,
                dimension: 26f64.ln() / ln3,
                covered: false,
            };
            handle(d, meta, |s| {
                let inner = 48.0 * pw(2.0, -s) / (s * (s - 1.0) * (s - 2.0) * (pw(3.0, s) - 26.0));
                Ok(inner + 6.0 / (s - 2.0) + 6.0 * PI / (s - 1.0) + 4.0 * PI / s)
            })
        }
        EntryParams::CantorGraph => {
            let rw = row(ln2 / ln3, 2.0 * PI / ln3, vec![], 1.0 / ln3, 0.0, &[0.0, 1.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::point(1.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-2.0, 1.0, 1.0),
                t_max: 1.0,
                dimension: 1.0,
                covered: true,
            };
            handle(d, meta, |s| Ok(2.0 / (s * (pw(3.0, s) - 2.0) * (s - 1.0))))
        }
        EntryParams::HalfSquare | EntryParams::HalfSquareGeometric => {
            let scale = if matches!(d.params, EntryParams::HalfSquare) { 1.0 } else { 16.0 };
            let rw = row(1.0, 2.0 * PI / ln2, vec![0], scale / (2.0 * ln2), -ln2, &[0.0, 1.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::point(1.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-1.0, 2.0, 1.0),
                t_max: 0.5,
                dimension: 1.0,
                covered: false,
            };
            handle(d, meta, move |s| {
                let inner = scale * pw(2.0, -s) / (s * (s - 1.0) * (pw(2.0, s) - 2.0));
                Ok(inner + 4.0 / (s - 1.0) + 2.0 * PI / s)
            })
        }
        EntryParams::ThirdSquare => {
            let meta = Meta {
                poles: vec![
                    PoleFamily::point(0.0),
                    PoleFamily::point(1.0),
                    PoleFamily::Row { re: ln2 / ln3, im0: 0.0, period: 2.0 * PI / ln3 },
                ],
                rows: vec![],
                languidity: LanguidityProfile::strong(-1.0, 2f64.sqrt(), 1.0),
                t_max: 1.0 / 2f64.sqrt(),
                dimension: 1.0,
                covered: false,
            };
            handle(d, meta, |s| {
                let z = third_square_z(s)?;
                Ok(2.0 / (s * (pw(3.0, s) - 2.0)) * (6.0 / (s - 1.0) + z) + 4.0 / (s - 1.0) + 2.0 * PI / s)
            })
        }
        EntryParams::SsNest { a } => {
            let l = (1.0 / a).ln();
            let coef = 4.0 * PI * (1.0 + a) / ((1.0 - a) * l);
            let rw = row(0.0, 2.0 * PI / l, vec![0], coef, ((1.0 - a) / 2.0).ln(), &[1.0]);
            let meta = Meta {
                poles: vec![PoleFamily::point(0.0), PoleFamily::point(1.0), row_family(&rw)],
                rows: vec![rw],
                languidity: LanguidityProfile::strong(-1.0, 2.0 / (1.0 - a), 1.0),
                t_max: (0.5f64).min(a / (2.0 * (1.0 - a))),
                dimension: 1.0,
                covered: false,
            };
            handle(d, meta, move |s| {
                let inner = 4.0 * pw(2.0, -s) * PI * (1.0 + a) * pw(1.0 - a, s - 1.0) / ((s - 1.0) * (1.0 - pw(a, s)));
                Ok(inner + 2.0 * PI / (s - 1.0) + 2.0 * PI / s)
            })
        }
        EntryParams::FractalNest { a } => {
            let meta = Meta {
                poles: vec![PoleFamily::point(1.0), PoleFamily::Arithmetic { start: 2.0 / (a + 1.0), step: 1.0 / (a + 1.0) }],
                rows: vec![],
                languidity: LanguidityProfile::weak(0.5, a + 1.0),
                t_max: 0.5,
                dimension: (2.0 / (a + 1.0)).max(1.0),
                covered: true,
            };
            handle(d, meta, move |s| {
                let l1 = zeta_lb(a, -a, 1.0, s, LB_DEPTH)?;
                let l0 = zeta_lb(a, 0.0, 0.0, s, LB_DEPTH)?;
                Ok((8.0 * pw(2.0, -s) * PI * l1 - 4.0 * pw(2.0, -s) * PI * l0) / (s - 1.0))
            })
        }
        EntryParams::Chirp { alpha, beta } => {
            let (a, b) = (1.0 / beta, -alpha / beta);
            let dim = (1.0 + 2.0 * beta - alpha) / (1.0 + beta);
            let meta = Meta {
                poles: vec![PoleFamily::point(1.0), PoleFamily::Arithmetic { start: dim, step: beta / (1.0 + beta) }],
                rows: vec![],
                languidity: LanguidityProfile::weak(-0.5 + b + (a + 1.0), a + 1.0),
                t_max: 0.5,
                dimension: dim,
                covered: true,
            };
            handle(d, meta, move |s| Ok(4.0 * pw(2.0, -s) / (s - 1.0) * zeta_lb(a, b, 1.0, s, LB_DEPTH)?))
        }
        EntryParams::Spray { ratios, kappa, generator_volume, inradius, ambient_dim } => {
            let sp = SelfSimilarSpray::new(ratios, kappa, generator_volume, inradius, ambient_dim)?;
            let mut h = spray_zeta(&sp)?;
            h.name = d.name.clone();
            h.boundary_volume = Some(d.omega_volume);
            h
        }
        EntryParams::Steiner { .. } => {
            return Err(Error::Mismatch("Steiner entries carry a tube zeta function; use steiner_tube_zeta".into()))
        }
    })
}

/// Integer exponents n_j with r_j = r₀^{n_j}, if the ratios are lattice.
fn lattice_exponents(ratios: &[f64]) -> Option<(f64, Vec<u32>)> {
    let logs: Vec<f64> = ratios.iter().map(|r| -r.ln()).collect();
    let lmin = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    for q in 1..=64u32 {
        let base = lmin / q as f64;
        let n: Vec<f64> = logs.iter().map(|l| l / base).collect();
        if n.iter().all(|x| (x - x.round()).abs() < 1e-9 * x.max(1.0)) {
            let n: Vec<u32> = n.iter().map(|x| x.round() as u32).collect();
            if n.iter().all(|&k| k <= 64) {
                return Some((base, n));
            }
            return None;
        }
    }
    None
}

/// Roots of Σ_j x^{n_j} = 1 by Durand–Kerner iteration.
fn lattice_polynomial_roots(n: &[u32]) -> Result<Vec<C>> {
    let deg = *n.iter().max().unwrap() as usize;
    let mut coef = vec![0.0; deg + 1];
    coef[0] = -1.0;
    for &k in n {
        coef[k as usize] += 1.0;
    }
    let lead = coef[deg];
    let p = |x: C| coef.iter().rev().fold(C::new(0.0, 0.0), |acc, &a| acc * x + a);
    let dp = |x: C| (1..=deg).rev().fold(C::new(0.0, 0.0), |acc, k| acc * x + coef[k] * k as f64);
    let mut z: Vec<C> = (0..deg).map(|k| C::from_polar(1.0, 0.4 + 2.0 * PI * k as f64 / deg as f64) * 0.9).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..deg {
            let mut den = C::new(lead, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = p(z[i]) / den;
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 {
            break;
        }
    }
    for x in z.iter_mut() {
        for _ in 0..3 {
            let d = dp(*x);
            if d.norm() > 0.0 {
                *x -= p(*x) / d;
            }
        }
        if dp(*x).norm() < 1e-8 || p(*x).norm() > 1e-10 {
            return Err(Error::Residual { residual: p(*x).norm(), value: dp(*x).norm() });
        }
    }
    Ok(z)
}

/// Rows of 1/(1 − Σ r_j^s) for lattice ratios: (ω₀, period, D′) with D′ the derivative of the denominator.
fn lattice_rows(ratios: &[f64]) -> Result<Option<Vec<(C, f64, C)>>> {
    let Some((l, n)) = lattice_exponents(ratios) else {
        return Ok(None);
    };
    let period = 2.0 * PI / l;
    let mut out = Vec::new();
    for x in lattice_polynomial_roots(&n)? {
        let mut im0 = -x.arg() / l;
        im0 -= (im0 / period).round() * period;
        let w0 = C::new(-x.norm().ln() / l, im0);
        let dprime: C = n.iter().map(|&k| l * k as f64 * x.powu(k)).sum();
        out.push((w0, period, dprime));
    }
    Ok(Some(out))
}

fn exclusions(w0: C, period: f64, points: &[f64]) -> Vec<i64> {
    points
        .iter()
        .filter(|p| (w0.re - *p).abs() < 1e-9)
        .filter_map(|_| {
            let k = (-w0.im / period).round();
            ((w0.im + k * period).abs() < 1e-9).then_some(k as i64)
        })
        .collect()
}

fn self_similar_string(d: &RfdDescriptor, ratios: Vec<f64>, gaps: Vec<f64>) -> Result<ZetaHandle> {
    let dim = moran_real_root(&ratios)?;
    let mut poles = vec![PoleFamily::point(0.0)];
    let mut rows = Vec::new();
    match lattice_rows(&ratios)? {
        Some(rs) => {
            for (w0, period, dp) in rs {
                let terms = gaps
                    .iter()
                    .map(|g| RowTerm::new(2.0 / dp, (g / 2.0).ln(), vec![], vec![c(0.0)]))
                    .collect();
                let rw = RowModel { re: w0.re, im0: w0.im, period, excluded: exclusions(w0, period, &[0.0]), terms };
                poles.push(row_family(&rw));
                rows.push(rw);
            }
        }
        None => poles.push(PoleFamily::Moran { ratios: ratios.clone() }),
    }
    let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let gmax = gaps.iter().cloned().fold(0.0, f64::max);
    let meta = Meta {
        poles,
        rows,
        languidity: LanguidityProfile::strong(-1.0, 2.0 * rmin / gmax, 1.0),
        t_max: gmax / (2.0 * rmin),
        dimension: dim,
        covered: true,
    };
    let rule = LengthRule::SelfSimilar { ratios, gaps };
    Ok(handle(d, meta, move |s| Ok(pw(2.0, 1.0 - s) * string_geometric_zeta(&rule, s)? / s)))
}

/// Geometric zeta function Σ ℓ_j^s, continued where a closed form is known.
pub fn string_geometric_zeta(rule: &LengthRule, s: C) -> Result<C> {
    let v = match rule {
        LengthRule::Cantor => 1.0 / (pw(3.0, s) - 2.0),
        LengthRule::AString { a } => zeta_lb(*a, 0.0, 0.0, s, LB_DEPTH)?,
        LengthRule::SelfSimilar { ratios, gaps } => {
            let num: C = gaps.iter().map(|g| pw(*g, s)).sum();
            let den: C = C::new(1.0, 0.0) - ratios.iter().map(|r| pw(*r, s)).sum::<C>();
            num / den
        }
        LengthRule::Explicit { lengths } => lengths.iter().map(|l| pw(*l, s)).sum(),
    };
    pole_or(v, s)
}

/// Σ ℓ_j^s by direct summation; only valid right of the abscissa of convergence.
pub fn string_geometric_zeta_direct(rule: &LengthRule, s: C) -> Result<C> {
    let abscissa = match rule {
        LengthRule::Cantor => 2f64.ln() / 3f64.ln(),
        LengthRule::AString { a } => 1.0 / (a + 1.0),
        LengthRule::SelfSimilar { ratios, .. } => moran_real_root(ratios)?,
        LengthRule::Explicit { lengths } => return Ok(lengths.iter().map(|l| pw(*l, s)).sum()),
    };
    if s.re <= abscissa {
        return Err(Error::Divergent(format!("direct sum of ℓ^s diverges at Re s = {} ≤ {abscissa}", s.re)));
    }
    match rule {
        LengthRule::AString { a } => {
            // head plus the leading term of the Euler–Maclaurin tail
            let j_max = 200_000usize;
            let mut acc = C::new(0.0, 0.0);
            for j in 1..=j_max {
                acc += pw(a_string_length(*a, j as f64), s);
            }
            let e = (a + 1.0) * s;
            let x = j_max as f64 + 0.5;
            Ok(acc + pw(*a, s) * pw(x, 1.0 - e) / (e - 1.0))
        }
        _ => {
            let (ratios, gaps) = match rule {
                LengthRule::Cantor => (vec![1.0 / 3.0; 2], vec![1.0 / 3.0]),
                LengthRule::SelfSimilar { ratios, gaps } => (ratios.clone(), gaps.clone()),
                _ => unreachable!(),
            };
            let base: C = gaps.iter().map(|g| pw(*g, s)).sum();
            let q: C = ratios.iter().map(|r| pw(*r, s)).sum();
            let mut term = base;
            let mut acc = C::new(0.0, 0.0);
            for _ in 0..100_000 {
                acc += term;
                if term.norm() < 1e-17 * acc.norm() {
                    return Ok(acc);
                }
                term *= q;
            }
            Err(Error::Divergent(format!("geometric series at {s} converges too slowly")))
        }
    }
}

/// Relative distance zeta function of a self-similar spray with a monophase generator.
pub fn spray_zeta(sp: &SelfSimilarSpray) -> Result<ZetaHandle> {
    let n = sp.ambient_dim;
    let g = sp.inradius;
    let gvol = sp.generator_volume;
    let kappa = sp.kappa.clone();
    let ratios = sp.ratios.clone();
    let points: Vec<f64> = (0..n).filter(|&i| kappa[i] != 0.0).map(|i| i as f64).collect();
    let mut poles: Vec<PoleFamily> = points.iter().map(|&p| PoleFamily::point(p)).collect();
    let mut rows = Vec::new();
    match lattice_rows(&ratios)? {
        Some(rs) => {
            for (w0, period, dp) in rs {
                let mut terms: Vec<RowTerm> = (0..n)
                    .filter(|&i| kappa[i] != 0.0)
                    .map(|i| RowTerm::new(c(-kappa[i] * g.powi(-(i as i32))) / dp, g.ln(), vec![c(n as f64)], vec![c(i as f64)]))
                    .collect();
                terms.push(RowTerm::new(c(gvol * g.powi(-(n as i32))) / dp, g.ln(), vec![], vec![]));
                let rw = RowModel { re: w0.re, im0: w0.im, period, excluded: exclusions(w0, period, &points), terms };
                poles.push(row_family(&rw));
                rows.push(rw);
            }
        }
        None => poles.push(PoleFamily::Moran { ratios: ratios.clone() }),
    }
    let nf = n as f64;
    let continuous = (sp.generator_tube(g * (1.0 - 1e-15)) - gvol).abs() <= 1e-10 * gvol;
    let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let dim = moran_real_root(&ratios)?.max(points.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let eval = move |s: C| -> Result<C> {
        let mut gen = C::new(0.0, 0.0);
        for (i, k) in kappa.iter().enumerate() {
            if *k != 0.0 {
                gen += *k * pw(g, s - i as f64) / (s - i as f64);
            }
        }
        let gen = (nf - s) * gen + gvol * pw(g, s - nf);
        let den = C::new(1.0, 0.0) - ratios.iter().map(|r| pw(*r, s)).sum::<C>();
        Ok(gen / den)
    };
    let mut h = ZetaHandle::from_fn("spray", ZetaKind::Distance, n, g, move |s| pole_or(eval(s)?, s));
    h.boundary_volume = Some(sp.total_volume());
    h.omega_covered = true;
    h.poles = poles;
    h.rows = rows;
    h.languidity = LanguidityProfile::strong(if continuous { -1.0 } else { 0.0 }, rmin / g, 1.0);
    h.t_max = g / rmin;
    h.dimension_hint = dim;
    Ok(h)
}

/// Tube zeta function Σ_k c_k δ^{s−k}/(s−k) of a set with positive reach.
pub fn steiner_tube_zeta(coeffs: &[f64], delta: f64) -> Result<ZetaHandle> {
    if coeffs.len() < 2 || coeffs.iter().all(|x| *x == 0.0) || !(delta > 0.0) {
        return Err(Error::Parameter("Steiner data needs N+1 >= 2 coefficients, not all zero, and δ > 0".into()));
    }
    let n = coeffs.len() - 1;
    let cs = coeffs.to_vec();
    let eval = move |s: C| -> Result<C> {
        let v: C = cs
            .iter()
            .enumerate()
            .filter(|(_, ck)| **ck != 0.0)
            .map(|(k, ck)| *ck * pw(delta, s - k as f64) / (s - k as f64))
            .sum();
        pole_or(v, s)
    };
    let mut h = ZetaHandle::from_fn("steiner", ZetaKind::Tube, n, delta, eval);
    h.poles = (0..=n).filter(|k| coeffs[*k] != 0.0).map(|k| PoleFamily::point(k as f64)).collect();
    h.boundary_volume = Some(coeffs.iter().enumerate().map(|(k, ck)| ck * delta.powi((n - k) as i32)).sum());
    h.languidity = LanguidityProfile::strong(-1.0, 1.0 / delta, 1.0);
    h.t_max = delta;
    h.dimension_hint = (0..=n).rev().find(|k| coeffs[*k] != 0.0).unwrap() as f64;
    Ok(h)
}

/// The Riemann zeta value ζ(α/β) appearing as the chirp residue at 1.
pub fn chirp_residue_at_one(alpha: f64, beta: f64) -> Result<f64> {
    Ok(2.0 * riemann_zeta(c(alpha / beta))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexcore::{contour_laurent, Rectangle};
    use crate::zetacat::{mellin_from_distance, shell_from_distance, tube_from_distance};

    fn entry(p: EntryParams) -> ZetaHandle {
        catalog_zeta(&RfdDescriptor::new(p).unwrap()).unwrap()
    }

    fn residue(h: &ZetaHandle, w: C) -> C {
        let f = |s: C| h.evaluate(s);
        contour_laurent(&f, w, 0.05, 4).unwrap().dimension().map(|d| d.residue()).unwrap_or(C::new(0.0, 0.0))
    }

    #[test]
    fn cantor_value_and_tube() {
        let h = entry(EntryParams::CantorString);
        assert!((h.evaluate(c(2.0)).unwrap() - c(1.0 / 28.0)).norm() < 1e-15);
        let t = tube_from_distance(&h, 1.0).unwrap();
        assert!((t.evaluate(c(2.0)).unwrap() - c(27.0 / 28.0)).norm() < 1e-14);
        let sh = shell_from_distance(&h).unwrap();
        assert!((residue(&sh, c(1.0)) + 1.0).norm() < 1e-9);
        let m = mellin_from_distance(&h).unwrap();
        assert!((residue(&m, c(1.0)) + 1.0).norm() < 1e-9);
    }

    #[test]
    fn catalog_residues() {
        let g = entry(EntryParams::Gasket);
        assert!(residue(&g, c(1.0)).norm() < 1e-9);
        let k = entry(EntryParams::Carpet3);
        assert!((residue(&k, c(2.0)) - c(96.0 / 17.0)).norm() < 1e-9);
    }

    #[test]
    fn row_models_match_contour_residues() {
        for p in [
            EntryParams::CantorString,
            EntryParams::Gasket,
            EntryParams::Carpet3,
            EntryParams::CantorGraph,
            EntryParams::HalfSquare,
            EntryParams::HalfSquareGeometric,
            EntryParams::SsNest { a: 0.5 },
            EntryParams::SelfSimilarString { ratios: vec![0.5, 0.25], gaps: vec![0.25] },
        ] {
            let h = entry(p);
            for r in &h.rows {
                for k in [-2i64, 1, 3] {
                    if r.excluded.contains(&k) {
                        continue;
                    }
                    let w = r.omega(k);
                    let got = residue(&h, w);
                    assert!((got - r.residue(k)).norm() < 1e-9 * (1.0 + got.norm()), "{} k={k}: {got} vs {}", h.name, r.residue(k));
                }
            }
        }
    }

    #[test]
    fn cantor_spray_matches_closed_form() {
        let sp = spray_zeta(&SelfSimilarSpray::cantor_string()).unwrap();
        let cs = entry(EntryParams::CantorString);
        for s in [C::new(0.3, 1.0), C::new(-1.5, 7.0), C::new(2.2, -3.0)] {
            let (a, b) = (sp.evaluate(s).unwrap(), cs.evaluate(s).unwrap());
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
        assert_eq!(sp.rows.len(), 1);
        let r = &sp.rows[0];
        let w = r.omega(2);
        assert!((residue(&sp, w) - r.residue(2)).norm() < 1e-9);
    }

    #[test]
    fn gasket_spray_rows() {
        let sp = spray_zeta(&SelfSimilarSpray::gasket()).unwrap();
        let r = &sp.rows[0];
        assert!((r.re - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
        let w = r.omega(1);
        assert!((residue(&sp, w) - r.residue(1)).norm() < 1e-9);
    }

    #[test]
    fn nonlattice_spray_uses_moran_family() {
        let sp = SelfSimilarSpray::new(vec![0.5, 1.0 / 3.0], vec![2.0], 0.25, 0.125, 1).unwrap();
        let h = spray_zeta(&sp).unwrap();
        assert!(h.rows.is_empty());
        let hint = h.known_poles_hint(&Rectangle::new(-0.5, 1.0, -20.0, 20.0).unwrap()).unwrap();
        assert!(hint.len() > 3);
    }

    #[test]
    fn third_square_z_at_integers() {
        // Z(0) = π/2 and Z(2) = ∫ dφ/(1 + sin 2φ) = 1
        assert!((third_square_z(c(0.0)).unwrap() - c(FRAC_PI_2)).norm() < 1e-12);
        assert!((third_square_z(c(2.0)).unwrap() - c(1.0)).norm() < 1e-11);
    }

    #[test]
    fn steiner_poles() {
        let h = steiner_tube_zeta(&[0.0, 0.0, 4.0, 0.0], 0.1).unwrap();
        assert_eq!(h.poles, vec![PoleFamily::point(2.0)]);
        let r = residue(&h, c(2.0));
        assert!((r - 4.0).norm() < 1e-9);
    }

    #[test]
    fn direct_and_closed_geometric_zeta() {
        let s = C::new(1.3, 0.4);
        for rule in [LengthRule::Cantor, LengthRule::SelfSimilar { ratios: vec![0.4, 0.3], gaps: vec![0.3] }] {
            let a = string_geometric_zeta(&rule, s).unwrap();
            let b = string_geometric_zeta_direct(&rule, s).unwrap();
            assert!((a - b).norm() < 1e-13);
        }
        let a = string_geometric_zeta(&LengthRule::AString { a: 1.0 }, c(2.0)).unwrap();
        let b = string_geometric_zeta_direct(&LengthRule::AString { a: 1.0 }, c(2.0)).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} {b}");
        assert!(string_geometric_zeta_direct(&LengthRule::Cantor, c(0.5)).is_err());
    }
}
