//! Descriptors, distance evaluators and independent tube-volume oracles.

pub mod descriptor;
pub mod oracles;
pub mod planar;
pub mod primitive;
pub mod spray;
pub mod strings;

pub use descriptor::{EntryParams, RfdDescriptor, RfdKind};
pub use oracles::{
    cantor_graph_tube_volume, CantorGraphOracle, ChirpOracle, FractalNestOracle, PolynomialOracle, SegmentOracle,
    SelfSimilarNestOracle, SumOracle,
};
pub use planar::{distance_to_set, pixel_tube_volume, PixelEstimate, PlanarRecipe};
pub use primitive::primitive_tube;
pub use spray::{spray_tube_volume, SelfSimilarSpray};
pub use strings::{string_tube_volume, FractalString, LengthRule};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Anything that can report V(t) = |A_t ∩ Ω|.
pub trait TubeOracle: Send + Sync {
    fn volume(&self, t: f64) -> f64;

    /// |Ω| when Ω has finite volume.
    fn omega_volume(&self) -> Option<f64> {
        None
    }

    /// Closed-form k-th primitive when the oracle has one.
    fn exact_primitive(&self, _k: usize, _t: f64) -> Option<f64> {
        None
    }

    /// Points where V fails to be smooth inside (0, t), used to split quadrature.
    fn kinks(&self, _t: f64) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: TubeOracle + ?Sized> TubeOracle for Box<T> {
    fn volume(&self, t: f64) -> f64 {
        (**self).volume(t)
    }
    fn omega_volume(&self) -> Option<f64> {
        (**self).omega_volume()
    }
    fn exact_primitive(&self, k: usize, t: f64) -> Option<f64> {
        (**self).exact_primitive(k, t)
    }
    fn kinks(&self, t: f64) -> Vec<f64> {
        (**self).kinks(t)
    }
}

/// Samples (t, V^{[k]}(t)) on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeSampleSeries {
    pub level: usize,
    pub samples: Vec<(f64, f64)>,
}

impl TubeSampleSeries {
    pub fn new(level: usize, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Parameter("sample abscissae must be strictly increasing".into()));
        }
        if samples.iter().any(|&(t, v)| !(t > 0.0) || !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Parameter("samples need t > 0 and finite nonnegative values".into()));
        }
        Ok(TubeSampleSeries { level, samples })
    }

    pub fn from_oracle<O: TubeOracle + ?Sized>(oracle: &O, level: usize, ts: &[f64]) -> Result<Self> {
        let samples = ts
            .iter()
            .map(|&t| primitive_tube(oracle, level, t).map(|v| (t, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(level, samples)
    }
}

/// n log-spaced points between lo and hi inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
