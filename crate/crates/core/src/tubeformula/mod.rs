//! Pointwise tube formulas: residue terms, expansions, screen error terms and reports.

mod report;
mod screen;
mod validate;

pub use report::{minkowski_report, Classification, DimensionReport, Measurability};
pub use screen::{screen_error_term, ScreenError};
pub use validate::{validate, ValidationRow, ValidationStats};

use crate::complexcore::{contour_laurent, default_radius, ComplexDimension, Rectangle, C};
use crate::error::{Error, Result};
use crate::zetacat::{partial_fractions, lattice_sum, PoleFamily, RowModel, ZetaHandle, ZetaKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default |Im ω| cut-off when a window does not give one.
pub const DEFAULT_IM_CUT: f64 = 50.0;
/// Default number of pole rows kept by truncated evaluation.
pub const DEFAULT_ROWS: usize = 1000;
/// Highest pole order probed by the Laurent extraction.
const MAX_ORDER: usize = 4;

/// Vertical-line screen Re s = σ with an optional truncation |Im ω| ≤ T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub screen_re: f64,
    pub im_cut: Option<f64>,
}

impl Window {
    pub fn new(screen_re: f64, im_cut: Option<f64>) -> Self {
        Window { screen_re, im_cut }
    }
}

/// coefficient · t^{N−ω+k} · (log t⁻¹)^m
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeTerm {
    pub omega: C,
    pub log_power: usize,
    pub coefficient: C,
    pub level: usize,
}

impl TubeTerm {
    pub fn eval(&self, n: usize, t: f64) -> C {
        let lt = -t.ln();
        let e = C::new((n + self.level) as f64, 0.0) - self.omega;
        self.coefficient * (-e * lt).exp() * lt.powi(self.log_power as i32)
    }
}

/// A whole row of simple dimensions; `model.residue(j)` is already divided by the kernel weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowPart {
    pub model: RowModel,
}

impl RowPart {
    fn rows_for(&self, k_rows: usize) -> (i64, i64) {
        let x = (k_rows as f64 + 0.5) * self.model.period;
        self.model.index_range(x)
    }

    /// Symmetric partial sum over |Im ω| ≤ (K + ½)p.
    pub fn truncated(&self, n: usize, level: usize, t: f64, k_rows: usize) -> C {
        let (lo, hi) = self.rows_for(k_rows);
        let lt = t.ln();
        let nk = (n + level) as f64;
        (lo..=hi)
            .filter(|j| !self.model.excluded.contains(j))
            .map(|j| self.model.residue(j) * ((nk - self.model.omega(j)) * lt).exp())
            .sum()
    }

    /// The full row summed in closed form.
    pub fn resummed(&self, n: usize, level: usize, t: f64) -> Result<C> {
        let x0 = -t.ln();
        let w0 = self.model.omega(0);
        let mut acc = C::new(0.0, 0.0);
        for term in &self.model.terms {
            for (p, w) in partial_fractions(&term.numer, &term.denom)? {
                acc += term.coef * w * lattice_sum(w0, self.model.period, p, term.beta + x0, &self.model.excluded)?;
            }
        }
        Ok(acc * t.powi((n + level) as i32))
    }

    /// Bound on the part of the row beyond K, from the fitted decay of |residue|.
    pub fn tail_bound(&self, n: usize, level: usize, t: f64, k_rows: usize) -> f64 {
        let env = |k: i64| -> f64 {
            (k..k + 8).map(|j| self.model.residue(j).norm() + self.model.residue(-j).norm()).fold(0.0, f64::max)
        };
        let k = k_rows.max(4) as i64;
        let (a1, a2) = (env(k + 1), env(8 * k));
        if a1 == 0.0 {
            return 0.0;
        }
        let d = (a1 / a2).ln() / 8f64.ln();
        if !(d > 1.05) {
            return f64::INFINITY;
        }
        2.0 * a1 * k as f64 / (d - 1.0) * t.powf((n + level) as f64 - self.model.re)
    }
}

/// Terms of a pointwise tube formula for V^{[k]}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeExpansion {
    pub ambient_dim: usize,
    pub level: usize,
    pub terms: Vec<TubeTerm>,
    pub rows: Vec<RowPart>,
    /// N − σ + k for window expansions, None when the formula is exact.
    pub error_exponent: Option<f64>,
    pub validity_t_max: f64,
}

/// Value of a truncated expansion and its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionValue {
    pub value: f64,
    pub tail_bound: f64,
    pub imag_residual: f64,
}

/// Dimensions found in a region, plus candidates whose principal part vanished.
#[derive(Debug, Clone, Default)]
pub struct DimensionScan {
    pub dims: Vec<ComplexDimension>,
    pub cancelled: Vec<C>,
}

pub(crate) fn kernel_weight_roots(z: &ZetaHandle, level: usize) -> Vec<f64> {
    let n = z.ambient_dim as f64;
    let first = if z.kind == ZetaKind::Distance { 0 } else { 1 };
    (first..=level).map(|j| n + j as f64).collect()
}

/// The screen integral converges absolutely when κ(σ) − deg w < −1.
pub(crate) fn check_languidity(z: &ZetaHandle, sigma: f64, level: usize) -> Result<()> {
    let deg = kernel_weight_roots(z, level).len() as f64;
    let kappa = z.languidity.kappa_at(sigma);
    if kappa - deg < -1.0 {
        Ok(())
    } else {
        let shift = if z.kind == ZetaKind::Distance { 0.0 } else { 1.0 };
        Err(Error::Languidity { k: level, kappa: kappa + shift })
    }
}

/// Whether the kernel for this kind leaves s = N out of the expansion.
fn skips_n(z: &ZetaHandle) -> bool {
    matches!(z.kind, ZetaKind::Distance | ZetaKind::Shell | ZetaKind::Mellin)
}

fn candidates(z: &ZetaHandle, window: Option<&Window>, with_rows: bool) -> Result<Vec<C>> {
    let n = z.ambient_dim as f64;
    let t_cut = window.and_then(|w| w.im_cut).unwrap_or(DEFAULT_IM_CUT);
    let re_max = n.max(z.dimension_hint) + 1.0;
    let re_min = match window {
        Some(w) => w.screen_re,
        None => {
            let finite = z.poles.iter().all(|p| match p {
                PoleFamily::Point { .. } => true,
                PoleFamily::Row { re, im0, period } => z.rows.iter().any(|r| r.re == *re && r.im0 == *im0 && r.period == *period),
                _ => false,
            });
            if !finite {
                return Err(Error::Parameter(format!(
                    "{}: a full-plane expansion needs finitely many isolated poles; give a screen",
                    z.name
                )));
            }
            let lowest = z
                .poles
                .iter()
                .map(|p| match p {
                    PoleFamily::Point { re, .. } | PoleFamily::Row { re, .. } => *re,
                    _ => 0.0,
                })
                .fold(0.0, f64::min);
            lowest - 1.0
        }
    };
    let rect = Rectangle::new(re_min, re_max, -t_cut, t_cut)?;
    let mut hint = z.known_poles_hint(&rect)?;
    if let Some(w) = window {
        if let Some(p) = hint.iter().find(|p| (p.re - w.screen_re).abs() < 1e-6) {
            return Err(Error::ScreenThroughPole(p.re));
        }
        hint.retain(|p| p.re > w.screen_re);
    }
    if skips_n(z) {
        hint.retain(|p| (p - n).norm() > 1e-9);
    }
    if !with_rows {
        // drop points carried by a row model unless the model excludes them
        hint.retain(|p| {
            !z.rows.iter().any(|r| {
                if (p.re - r.re).abs() > 1e-9 {
                    return false;
                }
                let j = ((p.im - r.im0) / r.period).round();
                (r.im0 + j * r.period - p.im).abs() < 1e-9 && !r.excluded.contains(&(j as i64))
            })
        });
    }
    Ok(hint)
}

fn laurent_at(z: &ZetaHandle, w: C, others: &[C]) -> Result<Option<ComplexDimension>> {
    let f = |s: C| z.evaluate(s);
    let r = default_radius(w, others).min(0.25);
    Ok(contour_laurent(&f, w, r, MAX_ORDER)?.dimension())
}

fn scan(z: &ZetaHandle, cands: &[C]) -> Result<DimensionScan> {
    let found: Vec<Result<(C, Option<ComplexDimension>)>> =
        cands.par_iter().map(|&w| Ok((w, laurent_at(z, w, cands)?))).collect();
    let mut out = DimensionScan::default();
    for r in found {
        match r? {
            (_, Some(d)) => out.dims.push(d),
            (w, None) => out.cancelled.push(w),
        }
    }
    Ok(out)
}

/// Complex dimensions right of the screen (or in the whole plane) with |Im ω| ≤ T.
pub fn scan_dimensions(z: &ZetaHandle, window: Option<&Window>) -> Result<DimensionScan> {
    let c = candidates(z, window, true)?;
    scan(z, &c)
}

/// Complex dimensions with their Laurent principal parts.
pub fn complex_dimensions(z: &ZetaHandle, window: Option<&Window>) -> Result<Vec<ComplexDimension>> {
    Ok(scan_dimensions(z, window)?.dims)
}

/// Taylor coefficients of 1/Π(a_j − u) up to u^m.
fn inverse_weight_series(roots: &[C], m: usize) -> Result<Vec<C>> {
    let mut out = vec![C::new(0.0, 0.0); m + 1];
    out[0] = C::new(1.0, 0.0);
    for &a in roots {
        if a.norm() < 1e-12 {
            return Err(Error::WeightZero(format!("{a}")));
        }
        // multiply by Σ u^i / a^{i+1}
        let mut next = vec![C::new(0.0, 0.0); m + 1];
        for (i, oi) in out.iter().enumerate() {
            let mut g = 1.0 / a;
            for j in 0..=(m - i) {
                next[i + j] += oi * g;
                g /= a;
            }
        }
        out = next;
    }
    Ok(out)
}

/// res(t^{N−s+k}/w(s) · z(s), ω) as a list of (coefficient, log power) terms.
pub fn residue_term(z: &ZetaHandle, dim: &ComplexDimension, level: usize) -> Result<Vec<TubeTerm>> {
    let w = dim.location;
    let roots: Vec<C> = kernel_weight_roots(z, level).into_iter().map(|r| r - w).collect();
    if skips_n(z) && roots.iter().any(|a| a.norm() < 1e-12) {
        return Err(Error::WeightZero(format!("{w}")));
    }
    let m = dim.order;
    let b = inverse_weight_series(&roots, m)?;
    let mut terms = Vec::new();
    let mut fact = 1.0;
    for i in 0..m {
        if i > 0 {
            fact *= i as f64;
        }
        let mut acc = C::new(0.0, 0.0);
        for j in (i + 1)..=m {
            acc += dim.coeff(j) * b[j - 1 - i];
        }
        if acc.norm() > 0.0 {
            terms.push(TubeTerm { omega: w, log_power: i, coefficient: acc / fact, level });
        }
    }
    Ok(terms)
}

/// The same residue by contour quadrature of the kernel at a fixed t.
pub fn residue_term_contour(z: &ZetaHandle, dim: &ComplexDimension, level: usize, t: f64, radius: f64) -> Result<C> {
    let n = z.ambient_dim as f64;
    let roots = kernel_weight_roots(z, level);
    let lt = t.ln();
    let f = |s: C| -> Result<C> {
        let mut v = z.evaluate(s)? * ((n + level as f64 - s) * lt).exp();
        for r in &roots {
            v /= r - s;
        }
        Ok(v)
    };
    Ok(contour_laurent(&f, dim.location, radius, MAX_ORDER)?.coeff(-1))
}

pub(crate) fn row_part(z: &ZetaHandle, r: &RowModel, level: usize) -> RowPart {
    let roots = kernel_weight_roots(z, level);
    let sign = if roots.len() % 2 == 0 { 1.0 } else { -1.0 };
    let denom: Vec<C> = roots.iter().map(|x| C::new(*x, 0.0)).collect();
    RowPart { model: r.transformed(C::new(sign, 0.0), 0.0, &[], &denom) }
}

fn sort_terms(terms: &mut [TubeTerm]) {
    terms.sort_by(|a, b| {
        a.omega
            .im
            .partial_cmp(&b.omega.im)
            .unwrap()
            .then(b.omega.re.partial_cmp(&a.omega.re).unwrap())
            .then(a.log_power.cmp(&b.log_power))
    });
}

/// Expansion of V^{[k]} from the poles of z.
///
/// Without a window the formula is exact on (0, t_max) and requires the
/// handle's poles to be isolated points and modelled rows. With a window only
/// dimensions right of the screen are kept and the error is O(t^{N−σ+k}).
pub fn tube_expansion(z: &ZetaHandle, window: Option<&Window>, level: usize) -> Result<TubeExpansion> {
    if !matches!(z.kind, ZetaKind::Distance | ZetaKind::Tube | ZetaKind::Shell | ZetaKind::Mellin) {
        return Err(Error::Mismatch(format!("no tube formula for a {:?} handle", z.kind)));
    }
    if let Some(w) = window {
        check_languidity(z, w.screen_re, level)?;
    }
    let cands = candidates(z, window, false)?;
    let found = scan(z, &cands)?;
    let mut terms = Vec::new();
    for d in &found.dims {
        terms.extend(residue_term(z, d, level)?);
    }
    sort_terms(&mut terms);
    let rows = z
        .rows
        .iter()
        .filter(|r| window.map_or(true, |w| r.re > w.screen_re))
        .map(|r| row_part(z, r, level))
        .collect();
    Ok(TubeExpansion {
        ambient_dim: z.ambient_dim,
        level,
        terms,
        rows,
        error_exponent: window.map(|w| z.ambient_dim as f64 - w.screen_re + level as f64),
        validity_t_max: if window.is_some() { z.delta.min(z.t_max) } else { z.t_max },
    })
}

fn check_t(exp: &TubeExpansion, t: f64) -> Result<()> {
    if !(t > 0.0 && t < exp.validity_t_max) {
        return Err(Error::Validity { t, t_max: exp.validity_t_max });
    }
    Ok(())
}

fn isolated_sum(exp: &TubeExpansion, t: f64) -> C {
    exp.terms.iter().map(|x| x.eval(exp.ambient_dim, t)).sum()
}

/// Symmetric partial sum keeping K pole rows on each side of the real axis.
pub fn evaluate_expansion(exp: &TubeExpansion, t: f64, k_rows: usize) -> Result<ExpansionValue> {
    check_t(exp, t)?;
    let mut v = isolated_sum(exp, t);
    let mut tail = 0.0;
    for r in &exp.rows {
        v += r.truncated(exp.ambient_dim, exp.level, t, k_rows);
        tail += r.tail_bound(exp.ambient_dim, exp.level, t, k_rows);
    }
    finish(v, tail)
}

/// Value with every pole row summed in closed form.
pub fn evaluate_resummed(exp: &TubeExpansion, t: f64) -> Result<f64> {
    check_t(exp, t)?;
    let mut v = isolated_sum(exp, t);
    for r in &exp.rows {
        v += r.resummed(exp.ambient_dim, exp.level, t)?;
    }
    Ok(finish(v, 0.0)?.value)
}

fn finish(v: C, tail: f64) -> Result<ExpansionValue> {
    if !v.re.is_finite() {
        return Err(Error::NonFinite("tube expansion".into()));
    }
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::Residual { residual: v.im.abs(), value: v.re });
    }
    Ok(ExpansionValue { value: v.re, tail_bound: tail, imag_residual: v.im.abs() })
}

/// Termwise t-derivative of an expansion at level k+1, giving level k.
pub fn differentiate(exp: &TubeExpansion) -> Result<TubeExpansion> {
    if exp.level == 0 {
        return Err(Error::Parameter("cannot differentiate a level-0 expansion".into()));
    }
    let n = exp.ambient_dim as f64;
    let k = exp.level as f64;
    let mut terms = Vec::new();
    for x in &exp.terms {
        // d/dt [c t^a L^m] = c t^{a−1} (a L^m − m L^{m−1}), a = N−ω+k
        let a = C::new(n + k, 0.0) - x.omega;
        terms.push(TubeTerm { omega: x.omega, log_power: x.log_power, coefficient: x.coefficient * a, level: exp.level - 1 });
        if x.log_power > 0 {
            terms.push(TubeTerm {
                omega: x.omega,
                log_power: x.log_power - 1,
                coefficient: -x.coefficient * x.log_power as f64,
                level: exp.level - 1,
            });
        }
    }
    let rows = exp
        .rows
        .iter()
        .map(|r| RowPart { model: r.model.transformed(C::new(-1.0, 0.0), 0.0, &[C::new(n + k, 0.0)], &[]) })
        .collect();
    Ok(TubeExpansion { level: exp.level - 1, terms, rows, error_exponent: exp.error_exponent.map(|e| e - 1.0), ..exp.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{string_tube_volume, EntryParams, FractalString, RfdDescriptor};
    use crate::zetacat::{catalog_zeta, tube_from_distance};

    fn entry(p: EntryParams) -> ZetaHandle {
        catalog_zeta(&RfdDescriptor::new(p).unwrap()).unwrap()
    }

    #[test]
    fn segment_is_exact() {
        let z = entry(EntryParams::Segment);
        let tz = tube_from_distance(&z, 5.0).unwrap();
        let e = tube_expansion(&tz, None, 0).unwrap();
        for t in [0.01, 0.3, 1.7] {
            let v = evaluate_expansion(&e, t, 10).unwrap().value;
            assert!((v - (2.0 * t + 1.0)).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn cantor_string_exact_and_truncated() {
        let z = entry(EntryParams::CantorString);
        let e = tube_expansion(&z, None, 0).unwrap();
        let s = FractalString::cantor();
        for t in [1.0 / 18.0, 0.003, 0.21, 0.4] {
            let exact = string_tube_volume(&s, t);
            let r = evaluate_resummed(&e, t).unwrap();
            assert!((r - exact).abs() < 1e-12, "t={t}: {r} vs {exact}");
            let v = evaluate_expansion(&e, t, 1000).unwrap();
            assert!((v.value - exact).abs() <= v.tail_bound, "t={t}: {} vs {exact} (bound {})", v.value, v.tail_bound);
        }
    }

    #[test]
    fn residue_terms_match_contour() {
        let z = entry(EntryParams::HalfSquare);
        let dims = complex_dimensions(&z, Some(&Window::new(-0.5, Some(12.0)))).unwrap();
        let one = dims.iter().find(|d| (d.location - 1.0).norm() < 1e-9).unwrap();
        assert_eq!(one.order, 2);
        for level in 0..3 {
            for d in &dims {
                let t = 0.07;
                let terms = residue_term(&z, d, level).unwrap();
                let sym: C = terms.iter().map(|x| x.eval(2, t)).sum();
                let num = residue_term_contour(&z, d, level, t, 0.2).unwrap();
                assert!((sym - num).norm() < 1e-9 * sym.norm().max(1e-3), "{} level {level}: {sym} vs {num}", d.location);
            }
        }
    }

    #[test]
    fn inverse_weight() {
        // 1/((2−u)(3−u)) = 1/6 + 5u/36 + 19u²/216
        let b = inverse_weight_series(&[C::new(2.0, 0.0), C::new(3.0, 0.0)], 2).unwrap();
        assert!((b[0].re - 1.0 / 6.0).abs() < 1e-15);
        assert!((b[1].re - 5.0 / 36.0).abs() < 1e-15);
        assert!((b[2].re - 19.0 / 216.0).abs() < 1e-15);
    }
}
