use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("gamma pole: argument {0} is a nonpositive integer")]
    GammaPole(f64),
    #[error("non-finite value produced while evaluating {0}")]
    NonFinite(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("root on region boundary near {re} + {im}i")]
    BoundaryRoot { re: f64, im: f64 },
    #[error("root count mismatch: winding number {winding}, refined roots {found}")]
    CountMismatch { winding: usize, found: usize },
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("insufficient expansion depth at s = {re} + {im}i")]
    InsufficientDepth { re: f64, im: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("t = {t} outside validity interval (0, {t_max})")]
    Validity { t: f64, t_max: f64 },
    #[error("imaginary residual {residual:e} too large (value {value:e})")]
    Residual { residual: f64, value: f64 },
    #[error("resolution too coarse: error bound {bound:e} exceeds 5% of {value:e}")]
    TooCoarse { bound: f64, value: f64 },
    #[error("languidity violated: level {k} must exceed kappa {kappa}")]
    Languidity { k: usize, kappa: f64 },
    #[error("kernel weight vanishes at pole {0}")]
    WeightZero(String),
    #[error("screen passes through pole near {0}")]
    ScreenThroughPole(f64),
    #[error("not enough complex dimensions: {0}")]
    InsufficientDims(String),
    #[error("functional equation mismatch: {0}")]
    Mismatch(String),
    #[error("delta too small: {0}")]
    DeltaTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
