use super::{residue_term, row_part};
use crate::complexcore::{ComplexDimension, C};
use crate::error::{Error, Result};
use crate::zetacat::{ZetaHandle, ZetaKind};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Samples of the periodic function G over one period.
const PERIOD_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurability {
    Measurable,
    NonmeasurableOscillatory,
    DegenerateGauge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Critical,
    StrictlySubcritical { d: f64 },
    Nonfractal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dimension: f64,
    pub content_lower: f64,
    pub content_upper: f64,
    pub content: Option<f64>,
    pub measurable: Measurability,
    pub gauge_content: Option<f64>,
    pub classification: Classification,
    pub subcriticality_index: Option<f64>,
    /// Vertical spacing of the dimensions on the critical line, if any.
    pub oscillatory_period: Option<f64>,
}

const ON_LINE: f64 = 1e-9;

fn weight(z: &ZetaHandle, w: C) -> C {
    if z.kind == ZetaKind::Distance {
        z.ambient_dim as f64 - w
    } else {
        C::new(1.0, 0.0)
    }
}

/// Minkowski dimension, content and fractality class read off the dimensions.
pub fn minkowski_report(z: &ZetaHandle, dims: &[ComplexDimension]) -> Result<DimensionReport> {
    let n = z.ambient_dim as f64;
    let dims: Vec<&ComplexDimension> = dims
        .iter()
        .filter(|d| z.kind != ZetaKind::Distance || (d.location - n).norm() > 1e-9)
        .collect();
    if dims.is_empty() {
        return Err(Error::InsufficientDims(format!("{}: no complex dimensions supplied", z.name)));
    }
    let big_d = dims.iter().map(|d| d.location.re).fold(f64::NEG_INFINITY, f64::max);
    let on_line: Vec<&&ComplexDimension> = dims.iter().filter(|d| (d.location.re - big_d).abs() < ON_LINE).collect();
    let real_d = on_line.iter().find(|d| d.is_real());
    let nonreal_d: Vec<_> = on_line.iter().filter(|d| !d.is_real()).collect();

    let nonreal_re = dims.iter().filter(|d| !d.is_real()).map(|d| d.location.re).fold(f64::NEG_INFINITY, f64::max);
    let (classification, alpha) = if !nonreal_d.is_empty() {
        (Classification::Critical, Some(big_d))
    } else if nonreal_re.is_finite() {
        (Classification::StrictlySubcritical { d: nonreal_re }, Some(nonreal_re))
    } else {
        (Classification::Nonfractal, None)
    };
    let period = nonreal_d.iter().map(|d| d.location.im.abs()).fold(f64::INFINITY, f64::min);
    let period = z.rows.iter().find(|r| (r.re - big_d).abs() < ON_LINE).map(|r| r.period).or(period.is_finite().then_some(period));

    let base = DimensionReport {
        dimension: big_d,
        content_lower: 0.0,
        content_upper: 0.0,
        content: None,
        measurable: Measurability::Measurable,
        gauge_content: None,
        classification,
        subcriticality_index: alpha,
        oscillatory_period: if nonreal_d.is_empty() { None } else { period },
    };

    if let Some(d) = real_d.filter(|d| d.order >= 2) {
        let terms = residue_term(z, d, 0)?;
        let top = terms.iter().max_by_key(|t| t.log_power).map(|t| t.coefficient.re).unwrap_or(0.0);
        let inf = if top >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        return Ok(DimensionReport {
            content_lower: inf,
            content_upper: inf,
            measurable: Measurability::DegenerateGauge,
            gauge_content: Some(top),
            ..base
        });
    }

    if !nonreal_d.is_empty() {
        let g = periodic_profile(z, big_d, &on_line, period.unwrap())?;
        let lo = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return Ok(DimensionReport {
            content_lower: lo,
            content_upper: hi,
            measurable: Measurability::NonmeasurableOscillatory,
            ..base
        });
    }

    let d = real_d.ok_or_else(|| Error::InsufficientDims("no real dimension on the critical line".into()))?;
    let c = (d.residue() / weight(z, d.location)).re;
    Ok(DimensionReport { content_lower: c, content_upper: c, content: Some(c), ..base })
}

/// G(L) with V(t) ≈ t^{N−D} G(log t⁻¹), sampled over one period in L.
fn periodic_profile(z: &ZetaHandle, big_d: f64, on_line: &[&&ComplexDimension], period: f64) -> Result<Vec<f64>> {
    let n = z.ambient_dim as f64;
    let span = 2.0 * PI / period;
    let row = z.rows.iter().find(|r| (r.re - big_d).abs() < ON_LINE).map(|r| row_part(z, r, 0));
    let mut out = Vec::with_capacity(PERIOD_SAMPLES);
    for i in 0..PERIOD_SAMPLES {
        let l = 5.0 + span * i as f64 / PERIOD_SAMPLES as f64;
        let t = (-l).exp();
        let mut v = C::new(0.0, 0.0);
        match &row {
            Some(r) => {
                v += r.resummed(z.ambient_dim, 0, t)? / t.powf(n - big_d);
                for d in on_line.iter().filter(|d| row_index(&r.model, d.location).map_or(true, |j| r.model.excluded.contains(&j))) {
                    v += d.residue() / weight(z, d.location) * C::new(0.0, d.location.im * l).exp();
                }
            }
            None => {
                for d in on_line {
                    v += d.residue() / weight(z, d.location) * C::new(0.0, d.location.im * l).exp();
                }
            }
        }
        out.push(v.re);
    }
    Ok(out)
}

fn row_index(r: &crate::zetacat::RowModel, w: C) -> Option<i64> {
    if (w.re - r.re).abs() > ON_LINE {
        return None;
    }
    let j = ((w.im - r.im0) / r.period).round();
    ((r.im0 + j * r.period - w.im).abs() < 1e-9).then_some(j as i64)
}
