use super::{evaluate_expansion, TubeExpansion};
use crate::error::Result;
use crate::geometry::{primitive_tube, TubeOracle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub t: f64,
    pub formula: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationStats {
    pub rows: Vec<ValidationRow>,
    pub sup_abs: f64,
    pub sup_rel: f64,
    /// Largest abs_err − tail_bound; nonpositive when every point is inside its bound.
    pub sup_excess: f64,
    pub passed: bool,
}

/// Compare an expansion with V^{[k]} from an oracle on a grid of t.
///
/// A point passes when abs_err ≤ abs_tol + tail_bound or rel_err ≤ rel_tol.
pub fn validate<O: TubeOracle + ?Sized>(
    exp: &TubeExpansion,
    oracle: &O,
    t_grid: &[f64],
    k_rows: usize,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<ValidationStats> {
    let rows: Vec<Result<ValidationRow>> = t_grid
        .par_iter()
        .map(|&t| {
            let f = evaluate_expansion(exp, t, k_rows)?;
            let o = primitive_tube(oracle, exp.level, t)?;
            let abs_err = (f.value - o).abs();
            Ok(ValidationRow {
                t,
                formula: f.value,
                oracle: o,
                abs_err,
                rel_err: if o != 0.0 { abs_err / o.abs() } else { abs_err },
                tail_bound: f.tail_bound,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let sup_abs = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    let sup_rel = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let sup_excess = rows.iter().map(|r| r.abs_err - r.tail_bound).fold(f64::NEG_INFINITY, f64::max);
    let passed = rows.iter().all(|r| r.abs_err <= abs_tol + r.tail_bound || r.rel_err <= rel_tol);
    Ok(ValidationStats { rows, sup_abs, sup_rel, sup_excess, passed })
}
