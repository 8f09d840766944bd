use super::contour::{contour_laurent, ComplexDimension};
use super::{Rectangle, C};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

const DEDUP_TOL: f64 = 1e-9;
const MIN_SEGMENT: f64 = 1e-12;
// Roots on the edge of the requested region count as inside it.
const REGION_SLACK: f64 = 1e-7;

struct Moran {
    logs: Vec<f64>,
}

impl Moran {
    fn new(ratios: &[f64]) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::Parameter("Moran equation needs at least one ratio".into()));
        }
        for r in ratios {
            if !(*r > 0.0 && *r < 1.0) {
                return Err(Error::Parameter(format!("scaling ratio {r} outside (0, 1)")));
            }
        }
        Ok(Moran { logs: ratios.iter().map(|r| r.ln()).collect() })
    }

    /// (f, f', Σ|r^s|) with f(s) = 1 − Σ r^s.
    fn eval(&self, s: C) -> (C, C, f64) {
        let mut f = C::new(1.0, 0.0);
        let mut df = C::new(0.0, 0.0);
        let mut mag = 1.0;
        for l in &self.logs {
            let p = (s * *l).exp();
            f -= p;
            df -= p * *l;
            mag += p.norm();
        }
        (f, df, mag)
    }

    fn f(&self, s: C) -> C {
        self.eval(s).0
    }

    fn max_rate(&self) -> f64 {
        self.logs.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }
}

/// The real solution D₀ of Σ rⱼ^σ = 1.
pub fn moran_real_root(ratios: &[f64]) -> Result<f64> {
    let m = Moran::new(ratios)?;
    let g = |x: f64| m.logs.iter().map(|l| (x * l).exp()).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (-1.0, 1.0);
    while g(lo) < 0.0 {
        lo *= 2.0;
    }
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Vertical strip [σ_L, D₀] containing every solution of the Moran equation.
pub fn moran_root_strip(ratios: &[f64]) -> Result<(f64, f64)> {
    let d0 = moran_real_root(ratios)?;
    let m = Moran::new(ratios)?;
    let (imin, _) = m
        .logs
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, l)| if *l < acc.1 { (i, *l) } else { acc });
    let lmin = m.logs[imin];
    let cmin = m.logs.iter().filter(|l| **l == lmin).count() as f64;
    // at a root, c_min r_min^σ ≤ 1 + Σ_rest r^σ
    let h = |x: f64| {
        let rest: f64 = m.logs.iter().filter(|l| **l != lmin).map(|l| (x * l).exp()).sum();
        cmin * (x * lmin).exp() - 1.0 - rest
    };
    if m.logs.iter().all(|l| *l == lmin) {
        return Ok((d0, d0));
    }
    let mut lo = d0 - 1.0;
    while h(lo) < 0.0 {
        lo -= (d0 - lo).max(1.0);
    }
    let mut hi = d0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, d0))
}

/// Change of arg f along the segment a→b, refining wherever the phase jumps.
fn phase_change(m: &Moran, a: C, b: C, fa: C, fb: C) -> Result<f64> {
    let d = (fb / fa).arg();
    if d.abs() <= 0.4 {
        return Ok(d);
    }
    if (b - a).norm() < MIN_SEGMENT {
        let z = 0.5 * (a + b);
        return Err(Error::BoundaryRoot { re: z.re, im: z.im });
    }
    let mid = 0.5 * (a + b);
    let fm = m.f(mid);
    Ok(phase_change(m, a, mid, fa, fm)? + phase_change(m, mid, b, fm, fb)?)
}

fn check_nonzero(m: &Moran, s: C) -> Result<C> {
    let (f, _, mag) = m.eval(s);
    if f.norm() < 1e-13 * mag {
        return Err(Error::BoundaryRoot { re: s.re, im: s.im });
    }
    Ok(f)
}

fn edge_phase(m: &Moran, a: C, b: C) -> Result<f64> {
    let step = 0.2 / m.max_rate();
    let n = (((b - a).norm() / step).ceil() as usize).max(4);
    let mut total = 0.0;
    let mut prev = a;
    let mut fprev = check_nonzero(m, a)?;
    for j in 1..=n {
        let z = a + (b - a) * (j as f64 / n as f64);
        let fz = check_nonzero(m, z)?;
        total += phase_change(m, prev, z, fprev, fz)?;
        prev = z;
        fprev = fz;
    }
    Ok(total)
}

/// Argument-principle count of zeros of 1 − Σ r^s inside a rectangle.
fn winding(m: &Moran, r: &Rectangle) -> Result<usize> {
    let c = [
        C::new(r.re_min, r.im_min),
        C::new(r.re_max, r.im_min),
        C::new(r.re_max, r.im_max),
        C::new(r.re_min, r.im_max),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += edge_phase(m, c[i], c[(i + 1) % 4])?;
    }
    let n = total / (2.0 * PI);
    let k = n.round();
    if (n - k).abs() > 0.1 || k < 0.0 {
        return Err(Error::Quadrature(format!("non-integral winding number {n}")));
    }
    Ok(k as usize)
}

fn newton(m: &Moran, seed: C, mult: usize, r: &Rectangle) -> Option<C> {
    let mut s = seed;
    let slack = 0.5 * r.width().max(r.height());
    let zone = r.inflate(slack);
    for _ in 0..100 {
        let (f, df, _) = m.eval(s);
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df * mult as f64;
        s -= step;
        if !zone.contains(s) || !s.re.is_finite() {
            return None;
        }
        if step.norm() < 1e-15 * s.norm().max(1.0) {
            break;
        }
    }
    let (f, _, mag) = m.eval(s);
    if f.norm() < 1e-11 * mag && r.inflate(1e-9).contains(s) {
        Some(s)
    } else {
        None
    }
}

struct Seeds {
    d0: f64,
    spacing: f64,
}

impl Seeds {
    fn inside(&self, r: &Rectangle) -> Option<C> {
        if self.d0 < r.re_min || self.d0 > r.re_max {
            return None;
        }
        let k = ((r.im_min + r.im_max) / 2.0 / self.spacing).round();
        let s = C::new(self.d0, k * self.spacing);
        r.contains(s).then_some(s)
    }
}

/// Locate `count` zeros (with multiplicity) inside r by bisection plus Newton.
fn isolate(m: &Moran, seeds: &Seeds, r: Rectangle, count: usize, out: &mut Vec<(C, usize)>) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let small = r.width().max(r.height()) < 1e-7;
    if count == 1 || small {
        let mult = if small { count } else { 1 };
        let mut tries = vec![r.center()];
        if let Some(s) = seeds.inside(&r) {
            tries.insert(0, s);
        }
        for seed in tries {
            if let Some(z) = newton(m, seed, mult, &r) {
                out.push((z, mult));
                return Ok(());
            }
        }
        if small {
            let z = r.center();
            return Err(Error::Quadrature(format!("Newton failed near {z}")));
        }
    }
    // split the longer side, nudging the cut off any root sitting on it
    let mut last = None;
    for frac in [0.5, 0.4637, 0.5371, 0.4219] {
        let (a, b) = if r.height() >= r.width() {
            let cut = r.im_min + frac * r.height();
            (Rectangle { im_max: cut, ..r }, Rectangle { im_min: cut, ..r })
        } else {
            let cut = r.re_min + frac * r.width();
            (Rectangle { re_max: cut, ..r }, Rectangle { re_min: cut, ..r })
        };
        match winding(m, &a) {
            Ok(na) => {
                if na > count {
                    return Err(Error::CountMismatch { winding: count, found: na });
                }
                isolate(m, seeds, a, na, out)?;
                return isolate(m, seeds, b, count - na, out);
            }
            Err(e @ Error::BoundaryRoot { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

fn strips(r: &Rectangle, max_height: f64) -> Vec<Rectangle> {
    // cuts are offset from the grid so symmetric or lattice roots never sit on them
    let n = ((1.4 * r.height() / max_height).ceil() as usize).max(1);
    let h = r.height() / n as f64;
    let cut = |i: usize| r.im_min + (i as f64 - 0.3827) * h;
    (0..n)
        .map(|i| Rectangle {
            im_min: if i == 0 { r.im_min } else { cut(i) },
            im_max: if i + 1 == n { r.im_max } else { cut(i + 1) },
            ..*r
        })
        .collect()
}

/// All solutions of Σ rⱼ^s = 1 in the (closed) region, as poles of
/// 1/(1 − Σ rⱼ^s) with their principal parts, sorted by (Im, Re).
pub fn find_moran_roots(ratios: &[f64], region: &Rectangle) -> Result<Vec<ComplexDimension>> {
    find_moran_roots_with(ratios, region, 1)
}

/// As [`find_moran_roots`], with each counting strip further cut into `refine` pieces.
pub fn find_moran_roots_with(ratios: &[f64], region: &Rectangle, refine: usize) -> Result<Vec<ComplexDimension>> {
    let m = Moran::new(ratios)?;
    let region = region.inflate(REGION_SLACK);
    let period = 2.0 * PI / m.max_rate();
    let seeds = Seeds { d0: moran_real_root(ratios)?, spacing: period };
    let total = winding(&m, &region)?;
    let pieces = strips(&region, period / 2.0 / refine.max(1) as f64);
    let found: Vec<Result<Vec<(C, usize)>>> = pieces
        .par_iter()
        .map(|p| {
            let n = winding(&m, p)?;
            let mut out = Vec::new();
            isolate(&m, &seeds, *p, n, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut roots: Vec<(C, usize)> = Vec::new();
    for part in found {
        for (z, k) in part? {
            if !roots.iter().any(|(w, _)| (w - z).norm() < DEDUP_TOL) {
                roots.push((z, k));
            }
        }
    }
    let counted: usize = roots.iter().map(|r| r.1).sum();
    if counted != total {
        return Err(Error::CountMismatch { winding: total, found: counted });
    }
    roots.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    let locs: Vec<C> = roots.iter().map(|r| r.0).collect();
    roots
        .iter()
        .map(|(z, k)| {
            let near = locs
                .iter()
                .map(|w| (w - z).norm())
                .filter(|d| *d > DEDUP_TOL)
                .fold(f64::INFINITY, f64::min);
            let radius = (0.4 * near).min(0.5);
            let g = |s: C| Ok(1.0 / m.f(s));
            let lx = contour_laurent(&g, *z, radius, *k + 1)?;
            let mut pp: Vec<C> = (1..=*k).rev().map(|j| lx.coeff(-(j as i64))).collect();
            if *k == 1 {
                // the simple-pole residue is known in closed form
                pp[0] = 1.0 / m.eval(*z).1;
            }
            ComplexDimension::new(*z, pp)
        })
        .collect()
}
