use clap::{Parser, ValueEnum};
use fzeta::complexcore::C;
use fzeta::tubeformula::DEFAULT_ROWS;
use std::path::PathBuf;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the catalog with N, δ, D and languidity data
    List,
    /// Evaluate a zeta function at --s
    Zeta,
    /// Complex dimensions with orders and residues
    Dims,
    /// Tube formula against the exact oracle on a t grid
    Tube,
    /// Oracle comparison with pass/fail status
    Validate,
    /// Minkowski dimension, content and fractality class
    Report,
    /// Truncated Mellin inversion of the tube zeta function
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Distance,
    Tube,
    Shell,
    Mellin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form from the catalog
    Closed,
    /// Quadrature of the tube-zeta integral over the exact oracle
    Quadrature,
    /// Stratified Monte Carlo over the planar set
    Mc,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fzeta", version, about = "Fractal zeta functions, complex dimensions and fractal tube formulas")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Catalog entry name
    #[arg(long)]
    pub entry: Option<String>,
    /// Parameter override k=v; v is parsed as JSON when possible (repeatable)
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    /// Extra catalog file with user entries
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Complex argument as re,im
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, value_enum, default_value = "distance")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: Method,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long = "t-min")]
    pub t_min: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long = "t-count", default_value_t = 50)]
    pub t_count: usize,
    /// Level k of the primitive V^[k]
    #[arg(long = "k-level", default_value_t = 0)]
    pub k_level: usize,
    /// Pole rows kept on each side of the real axis
    #[arg(long = "K-trunc", default_value_t = DEFAULT_ROWS)]
    pub k_trunc: usize,
    /// Vertical screen Re s = σ; without it tube formulas are exact
    #[arg(long = "screen-sigma", allow_hyphen_values = true)]
    pub screen_sigma: Option<f64>,
    /// Height of the window for dimension searches
    #[arg(long = "im-max")]
    pub im_max: Option<f64>,
    /// Half-height of the inversion line
    #[arg(long = "T", default_value_t = 1e4)]
    pub big_t: f64,
    /// Abscissa of the inversion line
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long = "abs-tol", default_value_t = 1e-6)]
    pub abs_tol: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Recursion depth of planar distance evaluations
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Output file; stdout when absent
    #[arg(long = "out")]
    pub output_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl RunConfig {
    pub fn entry_name(&self) -> CliResult<&str> {
        self.entry.as_deref().ok_or_else(|| CliError::Usage("--entry is required for this command".into()))
    }

    pub fn s_value(&self) -> CliResult<C> {
        let raw = self.s.as_deref().ok_or_else(|| CliError::Usage("--s re,im is required".into()))?;
        parse_complex(raw)
    }

    /// The t values requested by --t or --t-min/--t-max/--t-count.
    pub fn t_grid(&self) -> CliResult<Option<Vec<f64>>> {
        match (self.t, self.t_min, self.t_max) {
            (Some(t), None, None) => Ok(Some(vec![t])),
            (None, Some(lo), Some(hi)) => {
                if !(lo > 0.0 && hi > lo) || self.t_count == 0 {
                    return Err(CliError::Usage(format!("need 0 < t-min < t-max and t-count >= 1, got {lo}, {hi}, {}", self.t_count)));
                }
                Ok(Some(fzeta::geometry::log_grid(lo, hi, self.t_count)))
            }
            (None, None, None) => Ok(None),
            _ => Err(CliError::Usage("give either --t or both --t-min and --t-max".into())),
        }
    }
}

pub fn parse_complex(raw: &str) -> CliResult<C> {
    let bad = || CliError::Usage(format!("cannot read complex number '{raw}', expected re,im"));
    let mut parts = raw.split(',');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(C::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), C::new(1.5, -2.0));
        assert_eq!(parse_complex("-0.25").unwrap(), C::new(-0.25, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn flags_parse() {
        let c = RunConfig::try_parse_from(["fzeta", "tube", "--entry", "segment", "--t", "0.25", "--K-trunc", "7", "--screen-sigma", "-0.5"]).unwrap();
        assert_eq!(c.command, Command::Tube);
        assert_eq!(c.k_trunc, 7);
        assert_eq!(c.screen_sigma, Some(-0.5));
        assert_eq!(c.t_grid().unwrap(), Some(vec![0.25]));
        let c = RunConfig::try_parse_from(["fzeta", "zeta", "--entry", "gasket", "--s", "-1.5,2", "--param", "a=1"]).unwrap();
        assert_eq!(c.s_value().unwrap(), C::new(-1.5, 2.0));
        assert_eq!(c.params, vec!["a=1".to_string()]);
    }
}
