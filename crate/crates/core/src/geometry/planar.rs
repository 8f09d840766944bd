use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Planar sets with an exact distance evaluator.
///
/// `Gasket`, the squares, `Segment` and `SelfSimilarNest` are measured in the whole plane;
/// `GasketInner` uses the unit triangle as Ω and `FractalNest` the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case")]
pub enum PlanarRecipe {
    Segment,
    Gasket,
    GasketInner,
    HalfSquare,
    ThirdSquare,
    FractalNest { a: f64 },
    SelfSimilarNest { a: f64 },
}

type P = (f64, f64);

fn seg_dist(p: P, a: P, b: P) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    let u = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0);
    let (qx, qy) = (a.0 + u * dx - p.0, a.1 + u * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

fn rect_dist(p: P, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let dx = (x0 - p.0).max(p.0 - x1).max(0.0);
    let dy = (y0 - p.1).max(p.1 - y1).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

/// Distance from a point inside an axis box to the box boundary.
fn rect_inner(p: P, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    (p.0 - x0).min(x1 - p.0).min(p.1 - y0).min(y1 - p.1)
}

// Upward equilateral triangle with lower-left corner (x0, y0) and side l.
fn tri_coords(p: P, x0: f64, y0: f64, l: f64) -> (f64, f64) {
    ((p.0 - x0) / l, (p.1 - y0) / (l * SQRT3 * 0.5))
}

fn tri_inner(p: P, x0: f64, y0: f64, l: f64) -> f64 {
    // distances to the three edge lines; the slanted ones have unit normal (±√3, −1)/2
    let d0 = p.1 - y0;
    let d1 = (SQRT3 * (p.0 - x0) - (p.1 - y0)) * 0.5;
    let d2 = (SQRT3 * (x0 + l - p.0) - (p.1 - y0)) * 0.5;
    d0.min(d1).min(d2)
}

fn tri_outer(p: P, x0: f64, y0: f64, l: f64) -> f64 {
    let a = (x0, y0);
    let b = (x0 + l, y0);
    let c = (x0 + 0.5 * l, y0 + 0.5 * SQRT3 * l);
    seg_dist(p, a, b).min(seg_dist(p, b, c)).min(seg_dist(p, c, a))
}

fn gasket_dist(p: P, depth: usize) -> f64 {
    let (mut x0, mut y0, mut l) = (0.0, 0.0, 1.0);
    let (u, v) = tri_coords(p, x0, y0, l);
    if v < 0.0 || v > 2.0 * u || v > 2.0 * (1.0 - u) {
        return tri_outer(p, x0, y0, l);
    }
    for _ in 0..depth {
        let (u, v) = tri_coords(p, x0, y0, l);
        let h = 0.5 * l;
        if v < 0.5 && v > 2.0 * u - 1.0 && v > 1.0 - 2.0 * u {
            // inside the removed inverted triangle
            let top = y0 + 0.25 * SQRT3 * l - p.1;
            let left = (SQRT3 * (p.0 - x0 - 0.5 * l) + (p.1 - y0)) * 0.5;
            let right = (SQRT3 * (x0 + 0.5 * l - p.0) + (p.1 - y0)) * 0.5;
            return top.min(left.abs()).min(right.abs());
        }
        if v >= 0.5 {
            x0 += 0.25 * l;
            y0 += 0.25 * SQRT3 * l;
        } else if u >= 0.5 {
            x0 += h;
        }
        l = h;
    }
    tri_inner(p, x0, y0, l).max(0.0)
}

fn half_square_dist(p: P, depth: usize) -> f64 {
    if p.0 < 0.0 || p.0 > 1.0 || p.1 < 0.0 || p.1 > 1.0 {
        return rect_dist(p, 0.0, 0.0, 1.0, 1.0);
    }
    let (mut x0, mut y0, mut l) = (0.0, 0.0, 1.0);
    for _ in 0..depth {
        let h = 0.5 * l;
        let right = p.0 >= x0 + h;
        let upper = p.1 >= y0 + h;
        match (right, upper) {
            (true, false) => return rect_inner(p, x0 + h, y0, x0 + l, y0 + h),
            (false, true) => return rect_inner(p, x0, y0 + h, x0 + h, y0 + l),
            (true, true) => {
                x0 += h;
                y0 += h;
            }
            (false, false) => {}
        }
        l = h;
    }
    rect_inner(p, x0, y0, x0 + l, y0 + l).max(0.0)
}

fn third_square_dist(p: P, depth: usize) -> f64 {
    if p.0 < 0.0 || p.0 > 1.0 || p.1 < 0.0 || p.1 > 1.0 {
        return rect_dist(p, 0.0, 0.0, 1.0, 1.0);
    }
    let (mut x0, mut y0, mut l) = (0.0, 0.0, 1.0);
    for _ in 0..depth {
        let h = l / 3.0;
        let (u, v) = ((p.0 - x0) / l, (p.1 - y0) / l);
        if u <= 1.0 / 3.0 && v <= 1.0 / 3.0 {
        } else if u >= 2.0 / 3.0 && v >= 2.0 / 3.0 {
            x0 += 2.0 * h;
            y0 += 2.0 * h;
        } else {
            // the generator: cell minus its two corner squares
            let cell = rect_inner(p, x0, y0, x0 + l, y0 + l);
            let ll = rect_dist(p, x0, y0, x0 + h, y0 + h);
            let ur = rect_dist(p, x0 + 2.0 * h, y0 + 2.0 * h, x0 + l, y0 + l);
            return cell.min(ll).min(ur);
        }
        l = h;
    }
    rect_inner(p, x0, y0, x0 + l, y0 + l).max(0.0)
}

fn fractal_nest_dist(p: P, a: f64) -> f64 {
    let rho = p.0.hypot(p.1);
    if rho >= 1.0 {
        return rho - 1.0;
    }
    if rho == 0.0 {
        return 0.0;
    }
    let mut j = rho.powf(-1.0 / a).floor().max(1.0);
    while j.powf(-a) < rho {
        j -= 1.0;
    }
    while (j + 1.0).powf(-a) >= rho {
        j += 1.0;
    }
    (j.powf(-a) - rho).min(rho - (j + 1.0).powf(-a))
}

fn ss_nest_dist(p: P, a: f64) -> f64 {
    let rho = p.0.hypot(p.1);
    if rho >= 1.0 {
        return rho - 1.0;
    }
    if rho == 0.0 {
        return 0.0;
    }
    let mut k = (rho.ln() / a.ln()).floor();
    while a.powf(k) < rho {
        k -= 1.0;
    }
    while a.powf(k + 1.0) >= rho {
        k += 1.0;
    }
    (a.powf(k) - rho).min(rho - a.powf(k + 1.0))
}

/// Euclidean distance from x to the depth-level prefractal.
///
/// Cells left unresolved at the depth limit contribute their own boundary, which
/// belongs to the set for every recipe here.
pub fn distance_to_set(x: (f64, f64), set: &PlanarRecipe, depth: usize) -> f64 {
    match *set {
        PlanarRecipe::Segment => seg_dist(x, (0.0, 0.0), (1.0, 0.0)),
        PlanarRecipe::Gasket | PlanarRecipe::GasketInner => gasket_dist(x, depth),
        PlanarRecipe::HalfSquare => half_square_dist(x, depth),
        PlanarRecipe::ThirdSquare => third_square_dist(x, depth),
        PlanarRecipe::FractalNest { a } => fractal_nest_dist(x, a),
        PlanarRecipe::SelfSimilarNest { a } => ss_nest_dist(x, a),
    }
}

impl PlanarRecipe {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PlanarRecipe::FractalNest { a } if !(a > 0.0) => Err(Error::Parameter(format!("nest needs a > 0, got {a}"))),
            PlanarRecipe::SelfSimilarNest { a } if !(a > 0.0 && a < 1.0) => {
                Err(Error::Parameter(format!("self-similar nest needs 0 < a < 1, got {a}")))
            }
            _ => Ok(()),
        }
    }

    pub fn in_omega(&self, p: (f64, f64)) -> bool {
        match self {
            PlanarRecipe::GasketInner => {
                let (u, v) = tri_coords(p, 0.0, 0.0, 1.0);
                v >= 0.0 && v <= 2.0 * u && v <= 2.0 * (1.0 - u)
            }
            PlanarRecipe::FractalNest { .. } => p.0.hypot(p.1) <= 1.0,
            _ => true,
        }
    }

    /// Box containing A_t ∩ Ω.
    pub fn bounding_box(&self, t: f64) -> (f64, f64, f64, f64) {
        match self {
            PlanarRecipe::Segment => (-t, 1.0 + t, -t, t),
            PlanarRecipe::Gasket => (-t, 1.0 + t, -t, 0.5 * SQRT3 + t),
            PlanarRecipe::GasketInner => (0.0, 1.0, 0.0, 0.5 * SQRT3),
            PlanarRecipe::HalfSquare | PlanarRecipe::ThirdSquare => (-t, 1.0 + t, -t, 1.0 + t),
            PlanarRecipe::FractalNest { .. } => (-1.0, 1.0, -1.0, 1.0),
            PlanarRecipe::SelfSimilarNest { .. } => (-1.0 - t, 1.0 + t, -1.0 - t, 1.0 + t),
        }
    }

    /// Largest similarity ratio, used by the depth rule.
    pub fn max_ratio(&self) -> Option<f64> {
        match self {
            PlanarRecipe::Gasket | PlanarRecipe::GasketInner | PlanarRecipe::HalfSquare => Some(0.5),
            PlanarRecipe::ThirdSquare => Some(1.0 / 3.0),
            _ => None,
        }
    }

    /// ceil(log(1/t)/log(1/r_max)) + 2.
    pub fn default_depth(&self, t: f64) -> usize {
        match self.max_ratio() {
            Some(r) => ((1.0 / t).ln() / (1.0 / r).ln()).ceil().max(0.0) as usize + 2,
            None => 1,
        }
    }
}

/// A pixel count with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub cells: u64,
    pub boundary_cells: u64,
}

/// |A_t ∩ Ω| by counting cell centres within distance t.
///
/// Only cells whose centre lies within half a diagonal of the level set {d = t}
/// can be misclassified. The bound charges each cell h²·max(0, 1 − |d − t|/h);
/// along a straight stretch of the level set these weights sum to one cell per
/// column whatever the grid offset, which covers the at most half-cell counting
/// error there and keeps the bound proportional to h.
pub fn pixel_tube_volume(set: &PlanarRecipe, t: f64, depth: usize, resolution: usize) -> Result<PixelEstimate> {
    set.validate()?;
    if !(t > 0.0) || depth == 0 || resolution == 0 {
        return Err(Error::Parameter("pixel oracle needs t > 0, depth >= 1, resolution >= 1".into()));
    }
    if (resolution as f64) < 8.0 / t {
        return Err(Error::TooCoarse { bound: 1.0 / resolution as f64, value: t / 8.0 });
    }
    let h = 1.0 / resolution as f64;
    let (x0, x1, y0, y1) = set.bounding_box(t);
    let nx = ((x1 - x0) / h).ceil() as usize;
    let ny = ((y1 - y0) / h).ceil() as usize;
    let band = 0.5 * std::f64::consts::SQRT_2 * h;
    let rows: Vec<(u64, u64, f64)> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = y0 + (j as f64 + 0.5) * h;
            let (mut inside, mut edge, mut weight) = (0u64, 0u64, 0.0);
            for i in 0..nx {
                let p = (x0 + (i as f64 + 0.5) * h, y);
                if !set.in_omega(p) {
                    continue;
                }
                let d = distance_to_set(p, set, depth);
                if d <= t {
                    inside += 1;
                }
                if (d - t).abs() <= band {
                    edge += 1;
                }
                weight += (1.0 - (d - t).abs() / h).max(0.0);
            }
            (inside, edge, weight)
        })
        .collect();
    let (cells, edge, weight) = rows.iter().fold((0u64, 0u64, 0.0), |a, r| (a.0 + r.0, a.1 + r.1, a.2 + r.2));
    let value = cells as f64 * h * h;
    let error_bound = weight * h * h;
    if error_bound > 0.05 * value {
        return Err(Error::TooCoarse { bound: error_bound, value });
    }
    Ok(PixelEstimate { value, error_bound, cells, boundary_cells: edge })
}
