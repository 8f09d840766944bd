use super::oracles::{
    CantorGraphOracle, ChirpOracle, FractalNestOracle, PolynomialOracle, SegmentOracle, SelfSimilarNestOracle, SumOracle,
};
use super::planar::PlanarRecipe;
use super::spray::SelfSimilarSpray;
use super::strings::{FractalString, LengthRule};
use super::TubeOracle;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RfdKind {
    FractalString,
    SelfSimilarSpray,
    PlanarSet,
    SteinerSet,
}

/// Catalog entries and their parameters, tagged by `entry` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "entry", rename_all = "snake_case")]
pub enum EntryParams {
    Segment,
    CantorString,
    AString { a: f64 },
    SelfSimilarString { ratios: Vec<f64>, gaps: Vec<f64> },
    Gasket,
    Carpet3,
    CantorGraph,
    HalfSquare,
    HalfSquareGeometric,
    ThirdSquare,
    SsNest { a: f64 },
    FractalNest { a: f64 },
    Chirp { alpha: f64, beta: f64 },
    Spray { ratios: Vec<f64>, kappa: Vec<f64>, generator_volume: f64, inradius: f64, ambient_dim: usize },
    Steiner { c: Vec<f64>, delta: f64 },
}

impl EntryParams {
    pub fn name(&self) -> &'static str {
        match self {
            EntryParams::Segment => "segment",
            EntryParams::CantorString => "cantor_string",
            EntryParams::AString { .. } => "a_string",
            EntryParams::SelfSimilarString { .. } => "self_similar_string",
            EntryParams::Gasket => "gasket",
            EntryParams::Carpet3 => "carpet3",
            EntryParams::CantorGraph => "cantor_graph",
            EntryParams::HalfSquare => "half_square",
            EntryParams::HalfSquareGeometric => "half_square_geometric",
            EntryParams::ThirdSquare => "third_square",
            EntryParams::SsNest { .. } => "ss_nest",
            EntryParams::FractalNest { .. } => "fractal_nest",
            EntryParams::Chirp { .. } => "chirp",
            EntryParams::Spray { .. } => "spray",
            EntryParams::Steiner { .. } => "steiner",
        }
    }
}

/// A relative fractal drum (A, Ω) from the catalog.
///
/// `omega_volume` is |A_δ ∩ Ω|, which equals |Ω| whenever Ω ⊆ A_δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfdDescriptor {
    pub name: String,
    pub ambient_dim: usize,
    pub kind: RfdKind,
    pub params: EntryParams,
    pub delta: f64,
    pub omega_volume: f64,
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} must be positive and finite, got {x}")))
    }
}

impl RfdDescriptor {
    pub fn new(params: EntryParams) -> Result<Self> {
        let r3 = 3f64.sqrt();
        let (n, kind, delta, vol) = match &params {
            EntryParams::Segment => (1, RfdKind::SteinerSet, 2.0, 5.0),
            EntryParams::CantorString => (1, RfdKind::FractalString, 1.0, 1.0),
            EntryParams::AString { a } => {
                positive(*a, "a")?;
                (1, RfdKind::FractalString, 1.0, 1.0)
            }
            EntryParams::SelfSimilarString { ratios, gaps } => {
                let s = FractalString::new(LengthRule::SelfSimilar { ratios: ratios.clone(), gaps: gaps.clone() })?;
                let d = gaps.iter().cloned().fold(0.0, f64::max);
                (1, RfdKind::FractalString, d, s.total_length)
            }
            EntryParams::Gasket => (2, RfdKind::PlanarSet, 1.0, r3 / 4.0 + 3.0 + PI),
            EntryParams::Carpet3 => (3, RfdKind::PlanarSet, 1.0, 7.0 + 3.0 * PI + 4.0 * PI / 3.0),
            EntryParams::CantorGraph => (2, RfdKind::PlanarSet, 1.0 / 3.0, 1.0 / 7.0),
            EntryParams::HalfSquare | EntryParams::HalfSquareGeometric | EntryParams::ThirdSquare => {
                (2, RfdKind::PlanarSet, 1.0, 5.0 + PI)
            }
            EntryParams::SsNest { a } => {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(Error::Parameter(format!("self-similar nest needs 0 < a < 1, got {a}")));
                }
                (2, RfdKind::PlanarSet, 1.0, 4.0 * PI)
            }
            EntryParams::FractalNest { a } => {
                positive(*a, "a")?;
                (2, RfdKind::PlanarSet, 1.0, PI)
            }
            EntryParams::Chirp { alpha, beta } => {
                let o = ChirpOracle::new(*alpha, *beta)?;
                (2, RfdKind::PlanarSet, 1.0, o.omega_volume().unwrap())
            }
            EntryParams::Spray { ratios, kappa, generator_volume, inradius, ambient_dim } => {
                let s = SelfSimilarSpray::new(ratios.clone(), kappa.clone(), *generator_volume, *inradius, *ambient_dim)?;
                (*ambient_dim, RfdKind::SelfSimilarSpray, *inradius, s.total_volume())
            }
            EntryParams::Steiner { c, delta } => {
                positive(*delta, "delta")?;
                if c.len() < 2 || c.iter().all(|x| *x == 0.0) {
                    return Err(Error::Parameter("Steiner coefficients need N+1 >= 2 entries, not all zero".into()));
                }
                let n = c.len() - 1;
                let v: f64 = c.iter().enumerate().map(|(k, ck)| ck * delta.powi((n - k) as i32)).sum();
                (n, RfdKind::SteinerSet, *delta, v)
            }
        };
        Ok(RfdDescriptor { name: params.name().to_string(), ambient_dim: n, kind, params, delta, omega_volume: vol })
    }

    /// Exact tube-volume oracle, when one exists.
    pub fn oracle(&self) -> Option<Box<dyn TubeOracle>> {
        let pi = PI;
        Some(match &self.params {
            EntryParams::Segment => Box::new(SegmentOracle),
            EntryParams::CantorString => Box::new(FractalString::cantor()),
            EntryParams::AString { a } => Box::new(FractalString::a_string(*a).ok()?),
            EntryParams::SelfSimilarString { ratios, gaps } => {
                Box::new(FractalString::new(LengthRule::SelfSimilar { ratios: ratios.clone(), gaps: gaps.clone() }).ok()?)
            }
            EntryParams::Gasket => Box::new(SumOracle {
                parts: vec![Box::new(PolynomialOracle { coeffs: vec![0.0, 3.0, pi] }), Box::new(SelfSimilarSpray::gasket())],
            }),
            EntryParams::HalfSquareGeometric | EntryParams::HalfSquare => Box::new(SumOracle {
                parts: vec![Box::new(PolynomialOracle { coeffs: vec![0.0, 4.0, pi] }), Box::new(SelfSimilarSpray::half_square())],
            }),
            EntryParams::CantorGraph => Box::new(CantorGraphOracle),
            EntryParams::SsNest { a } => Box::new(SelfSimilarNestOracle::new(*a).ok()?),
            EntryParams::FractalNest { a } => Box::new(FractalNestOracle::new(*a).ok()?),
            EntryParams::Chirp { alpha, beta } => Box::new(ChirpOracle::new(*alpha, *beta).ok()?),
            EntryParams::Spray { ratios, kappa, generator_volume, inradius, ambient_dim } => Box::new(
                SelfSimilarSpray::new(ratios.clone(), kappa.clone(), *generator_volume, *inradius, *ambient_dim).ok()?,
            ),
            EntryParams::Steiner { c, .. } => {
                Box::new(PolynomialOracle { coeffs: c.iter().rev().cloned().collect() })
            }
            EntryParams::Carpet3 | EntryParams::ThirdSquare => return None,
        })
    }

    /// Planar recipe for the pixel oracle and Monte Carlo sampling.
    pub fn planar(&self) -> Option<PlanarRecipe> {
        match &self.params {
            EntryParams::Gasket => Some(PlanarRecipe::Gasket),
            EntryParams::HalfSquare | EntryParams::HalfSquareGeometric => Some(PlanarRecipe::HalfSquare),
            EntryParams::ThirdSquare => Some(PlanarRecipe::ThirdSquare),
            EntryParams::FractalNest { a } => Some(PlanarRecipe::FractalNest { a: *a }),
            EntryParams::SsNest { a } => Some(PlanarRecipe::SelfSimilarNest { a: *a }),
            _ => None,
        }
    }
}
