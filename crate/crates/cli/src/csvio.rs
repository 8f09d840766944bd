//! Fixed CSV layouts and a reader for each.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

use crate::error::CliResult;

/// Row of `tube` and `validate` output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeRow {
    pub t: f64,
    pub formula: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tail_bound: f64,
}

pub const TUBE_COLUMNS: [&str; 6] = ["t", "formula", "oracle", "abs_err", "rel_err", "tail_bound"];

/// Row of `dims` output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimRow {
    pub re_omega: f64,
    pub im_omega: f64,
    pub order: usize,
    pub res_re: f64,
    pub res_im: f64,
}

pub const DIM_COLUMNS: [&str; 5] = ["re_omega", "im_omega", "order", "res_re", "res_im"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListRow {
    pub name: String,
    pub kind: String,
    pub ambient_dim: usize,
    pub delta: f64,
    pub dimension: f64,
    pub kappa: f64,
    pub kappa_slope: f64,
    pub strong: bool,
    pub t_max: f64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaRow {
    pub entry: String,
    pub kind: String,
    pub method: String,
    pub s_re: f64,
    pub s_im: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub std_err_re: Option<f64>,
    pub std_err_im: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub entry: String,
    pub dimension: f64,
    pub content_lower: f64,
    pub content_upper: f64,
    pub content: Option<f64>,
    pub measurable: String,
    pub gauge_content: Option<f64>,
    pub classification: String,
    pub subcriticality_index: Option<f64>,
    pub oscillatory_period: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvertRow {
    pub t: f64,
    pub c: f64,
    pub im_max: f64,
    pub value: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub imag_residual: f64,
}

pub fn write_csv<T: Serialize, W: Write>(out: W, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> CliResult<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

pub fn read_tube_csv<R: Read>(input: R) -> CliResult<Vec<TubeRow>> {
    read_csv(input)
}

pub fn read_dims_csv<R: Read>(input: R) -> CliResult<Vec<DimRow>> {
    read_csv(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_are_fixed() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[TubeRow { t: 0.25, formula: 1.5, oracle: 1.5, abs_err: 0.0, rel_err: 0.0, tail_bound: 0.0 }]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), TUBE_COLUMNS.join(","));
        let mut buf = Vec::new();
        write_csv(&mut buf, &[DimRow { re_omega: 0.5, im_omega: -1.0, order: 2, res_re: 1.0, res_im: 0.0 }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().next().unwrap(), DIM_COLUMNS.join(","));
    }
}
