use fzeta::complexcore::C;
use fzeta::geometry::{RfdDescriptor, TubeOracle};
use fzeta::tubeformula::{
    complex_dimensions, evaluate_expansion, scan_dimensions, minkowski_report, tube_expansion, validate, Classification, DimensionReport,
    TubeExpansion, Window, DEFAULT_IM_CUT,
};
use fzeta::zetacat::{
    distance_from_tube, mellin_from_distance, shell_from_distance, tube_from_distance, ZetaHandle, ZetaKind,
};
use fzeta::zetanum::{mc_distance_zeta, mellin_invert_tube, numeric_tube_zeta, McConfig, McRegion};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

use crate::catalog::{tube_handle, zeta_handle, Catalog};
use crate::config::{KindArg, Method, RunConfig};
use crate::csvio::{write_csv, DimRow, InvertRow, ListRow, ReportRow, TubeRow, ZetaRow};
use crate::error::{CliError, CliResult};

/// Screen offset left of D used when no --screen-sigma is given.
const DEFAULT_SCREEN_GAP: f64 = 1.37;

/// A command result in every output format.
pub struct Rendered {
    pub text: String,
    pub json: Value,
    pub csv: Vec<u8>,
    /// Set when a validation run did not pass.
    pub failure: Option<String>,
}

fn rendered<T: Serialize>(text: String, json: Value, rows: &[T]) -> CliResult<Rendered> {
    let mut csv = Vec::new();
    write_csv(&mut csv, rows)?;
    Ok(Rendered { text, json, csv, failure: None })
}

fn kind_name<T: Serialize>(k: &T) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn fmt_c(z: C) -> String {
    if z.im < 0.0 {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

fn dims_window(cfg: &RunConfig, z: &ZetaHandle) -> Window {
    Window::new(
        cfg.screen_sigma.unwrap_or(z.dimension_hint - DEFAULT_SCREEN_GAP),
        Some(cfg.im_max.unwrap_or(DEFAULT_IM_CUT)),
    )
}

pub fn list(cat: &Catalog) -> CliResult<Rendered> {
    let mut rows = Vec::new();
    for e in &cat.entries {
        let d = cat.resolve(&e.name, &[])?;
        let z = zeta_handle(&d)?;
        rows.push(ListRow {
            name: e.name.clone(),
            kind: kind_name(&d.kind),
            ambient_dim: d.ambient_dim,
            delta: d.delta,
            dimension: z.dimension_hint,
            kappa: z.languidity.kappa,
            kappa_slope: z.languidity.kappa_slope,
            strong: z.languidity.strong,
            t_max: z.t_max,
            description: e.description.clone(),
        });
    }
    let mut text = format!("{:<24}{:<20}{:>3}{:>10}{:>10}{:>8}{:>8}  {}\n", "entry", "kind", "N", "delta", "D", "kappa", "strong", "description");
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<24}{:<20}{:>3}{:>10.6}{:>10.6}{:>8}{:>8}  {}",
            r.name, r.kind, r.ambient_dim, r.delta, r.dimension, r.kappa, r.strong, r.description
        );
    }
    let json = json!({ "schema_version": cat.schema_version, "entries": rows });
    rendered(text, json, &rows)
}

fn distance_handle(d: &RfdDescriptor, z: &ZetaHandle) -> CliResult<ZetaHandle> {
    Ok(if z.kind == ZetaKind::Tube { distance_from_tube(z, d.omega_volume)? } else { z.clone() })
}

fn need_oracle(d: &RfdDescriptor) -> CliResult<Box<dyn TubeOracle>> {
    d.oracle().ok_or_else(|| CliError::Usage(format!("entry '{}' has no exact tube oracle", d.name)))
}

pub fn zeta(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let s = cfg.s_value()?;
    let z = zeta_handle(&d)?;
    let n = d.ambient_dim as f64;
    let mut std_err = None;
    let value = match cfg.method {
        Method::Closed => {
            let h = match cfg.kind {
                KindArg::Distance => distance_handle(&d, &z)?,
                KindArg::Tube if z.kind == ZetaKind::Tube => z.clone(),
                KindArg::Tube => tube_from_distance(&z, d.omega_volume)?,
                KindArg::Shell => shell_from_distance(&distance_handle(&d, &z)?)?,
                KindArg::Mellin => mellin_from_distance(&distance_handle(&d, &z)?)?,
            };
            h.evaluate(s)?
        }
        Method::Quadrature => {
            let o = need_oracle(&d)?;
            let tz = numeric_tube_zeta(o.as_ref(), s, d.delta, d.ambient_dim)?;
            let dist = || ((s - n) * d.delta.ln()).exp() * d.omega_volume + (n - s) * tz;
            match cfg.kind {
                KindArg::Tube => tz,
                KindArg::Distance => dist(),
                KindArg::Shell => dist() / (n - s),
                KindArg::Mellin => return Err(CliError::Usage("quadrature covers tube, distance and shell kinds".into())),
            }
        }
        Method::Mc => {
            if cfg.kind != KindArg::Distance {
                return Err(CliError::Usage("Monte Carlo estimates the distance zeta function only".into()));
            }
            let set = d.planar().ok_or_else(|| CliError::Usage(format!("entry '{}' has no planar recipe", d.name)))?;
            let region = McRegion {
                bbox: set.bounding_box(d.delta),
                delta: Some(d.delta),
                dimension: z.dimension_hint,
                depth: cfg.depth,
            };
            let est = mc_distance_zeta(&set, &region, s, &McConfig::new(cfg.samples, cfg.seed))?;
            std_err = Some((est.std_err_re, est.std_err_im));
            est.value
        }
    };
    let row = ZetaRow {
        entry: d.name.clone(),
        kind: format!("{:?}", cfg.kind).to_lowercase(),
        method: format!("{:?}", cfg.method).to_lowercase(),
        s_re: s.re,
        s_im: s.im,
        value_re: value.re,
        value_im: value.im,
        std_err_re: std_err.map(|e| e.0),
        std_err_im: std_err.map(|e| e.1),
    };
    let mut text = format!("{} {} zeta at s = {}: {}", row.entry, row.kind, fmt_c(s), fmt_c(value));
    if let Some((a, b)) = std_err {
        let _ = write!(text, " (std err {a}, {b}; {} samples, seed {})", cfg.samples, cfg.seed);
    }
    text.push('\n');
    let json = serde_json::to_value(&row)?;
    rendered(text, json, &[row])
}

pub fn dims(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let z = zeta_handle(&d)?;
    let w = dims_window(cfg, &z);
    let scan = scan_dimensions(&z, Some(&w))?;
    let found = scan.dims;
    let rows: Vec<DimRow> = found
        .iter()
        .map(|x| {
            let r = x.residue();
            DimRow { re_omega: x.location.re, im_omega: x.location.im, order: x.order, res_re: r.re, res_im: r.im }
        })
        .collect();
    let mut text = format!("{}: {} complex dimensions with Re > {}, |Im| <= {}\n", d.name, rows.len(), w.screen_re, w.im_cut.unwrap_or(f64::INFINITY));
    for (x, r) in found.iter().zip(&rows) {
        let _ = writeln!(text, "  {}  order {}  residue {}", fmt_c(x.location), r.order, fmt_c(x.residue()));
    }
    for w in &scan.cancelled {
        let _ = writeln!(text, "  {}  pole absent within tolerance", fmt_c(*w));
    }
    let json = json!({ "entry": d.name, "window": w, "dimensions": found, "absent": scan.cancelled });
    rendered(text, json, &rows)
}

fn expansion_for(cfg: &RunConfig, d: &RfdDescriptor) -> CliResult<TubeExpansion> {
    let z = tube_handle(d)?;
    let w = cfg.screen_sigma.map(|sigma| Window::new(sigma, cfg.im_max));
    Ok(tube_expansion(&z, w.as_ref(), cfg.k_level)?)
}

fn expansion_text(name: &str, exp: &TubeExpansion) -> String {
    let mut text = format!("{name}: expansion of V^[{}] valid for 0 < t < {}", exp.level, exp.validity_t_max);
    match exp.error_exponent {
        Some(e) => {
            let _ = writeln!(text, ", error O(t^{e})");
        }
        None => text.push_str(", exact\n"),
    }
    for x in &exp.terms {
        let _ = writeln!(text, "  pole {}  log power {}  coefficient {}", fmt_c(x.omega), x.log_power, fmt_c(x.coefficient));
    }
    for r in &exp.rows {
        let _ = writeln!(text, "  pole row Re = {}, spacing {}", r.model.re, r.model.period);
    }
    text
}

fn rows_text(rows: &[TubeRow]) -> String {
    let mut text = format!("{:>24}{:>24}{:>24}{:>12}{:>12}{:>12}\n", "t", "formula", "oracle", "abs_err", "rel_err", "tail_bound");
    for r in rows {
        let _ = writeln!(
            text,
            "{:>24}{:>24}{:>24}{:>12.3e}{:>12.3e}{:>12.3e}",
            r.t, r.formula, r.oracle, r.abs_err, r.rel_err, r.tail_bound
        );
    }
    text
}

fn tube_rows(exp: &TubeExpansion, oracle: Option<&dyn TubeOracle>, grid: &[f64], k_rows: usize) -> CliResult<Vec<TubeRow>> {
    if let Some(o) = oracle {
        let st = validate(exp, o, grid, k_rows, 0.0, 0.0)?;
        return Ok(st
            .rows
            .iter()
            .map(|r| TubeRow { t: r.t, formula: r.formula, oracle: r.oracle, abs_err: r.abs_err, rel_err: r.rel_err, tail_bound: r.tail_bound })
            .collect());
    }
    grid.iter()
        .map(|&t| {
            let v = evaluate_expansion(exp, t, k_rows)?;
            Ok(TubeRow { t, formula: v.value, oracle: f64::NAN, abs_err: f64::NAN, rel_err: f64::NAN, tail_bound: v.tail_bound })
        })
        .collect()
}

pub fn tube(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let grid = cfg.t_grid()?.ok_or_else(|| CliError::Usage("tube needs --t or --t-min/--t-max".into()))?;
    let exp = expansion_for(cfg, &d)?;
    let oracle = d.oracle();
    let rows = tube_rows(&exp, oracle.as_deref(), &grid, cfg.k_trunc)?;
    let text = expansion_text(&d.name, &exp) + &rows_text(&rows);
    let json = json!({ "entry": d.name, "expansion": exp, "rows": rows });
    rendered(text, json, &rows)
}

pub fn validate_entry(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let o = need_oracle(&d)?;
    let exp = expansion_for(cfg, &d)?;
    let grid = match cfg.t_grid()? {
        Some(g) => g,
        None => {
            let tm = if exp.validity_t_max.is_finite() { exp.validity_t_max } else { d.delta };
            fzeta::geometry::log_grid(1e-4 * tm, 0.9 * tm, cfg.t_count)
        }
    };
    let st = validate(&exp, o.as_ref(), &grid, cfg.k_trunc, cfg.abs_tol, cfg.rel_tol)?;
    let rows: Vec<TubeRow> = st
        .rows
        .iter()
        .map(|r| TubeRow { t: r.t, formula: r.formula, oracle: r.oracle, abs_err: r.abs_err, rel_err: r.rel_err, tail_bound: r.tail_bound })
        .collect();
    let verdict = if st.passed { "PASS" } else { "FAIL" };
    let summary = format!(
        "{verdict}: {} points, sup abs err {:e}, sup rel err {:e}, max(err - tail bound) {:e} (abs tol {}, rel tol {})",
        rows.len(),
        st.sup_abs,
        st.sup_rel,
        st.sup_excess,
        cfg.abs_tol,
        cfg.rel_tol
    );
    let text = expansion_text(&d.name, &exp) + &rows_text(&rows) + &summary + "\n";
    let json = json!({ "entry": d.name, "passed": st.passed, "sup_abs": st.sup_abs, "sup_rel": st.sup_rel, "sup_excess": st.sup_excess, "rows": rows });
    let mut out = rendered(text, json, &rows)?;
    if !st.passed {
        out.failure = Some(format!("{}: {summary}", d.name));
    }
    Ok(out)
}

fn classification_name(c: &Classification) -> String {
    match c {
        Classification::Critical => "critical".into(),
        Classification::StrictlySubcritical { d } => format!("strictly_subcritical(d={d})"),
        Classification::Nonfractal => "nonfractal".into(),
    }
}

pub fn report(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let z = zeta_handle(&d)?;
    let found = complex_dimensions(&z, Some(&dims_window(cfg, &z)))?;
    let r: DimensionReport = minkowski_report(&z, &found)?;
    let row = ReportRow {
        entry: d.name.clone(),
        dimension: r.dimension,
        content_lower: r.content_lower,
        content_upper: r.content_upper,
        content: r.content,
        measurable: kind_name(&r.measurable),
        gauge_content: r.gauge_content,
        classification: classification_name(&r.classification),
        subcriticality_index: r.subcriticality_index,
        oscillatory_period: r.oscillatory_period,
    };
    let mut text = format!("{}: D = {}, {}, {}\n", row.entry, row.dimension, row.measurable, row.classification);
    let _ = writeln!(text, "  Minkowski content in [{}, {}]", row.content_lower, row.content_upper);
    if let Some(c) = row.content {
        let _ = writeln!(text, "  content {c}");
    }
    if let Some(g) = row.gauge_content {
        let _ = writeln!(text, "  gauge content {g} (gauge t^(N-D) log(1/t))");
    }
    if let Some(p) = row.oscillatory_period {
        let _ = writeln!(text, "  oscillatory period {p}");
    }
    let json = json!({ "entry": d.name, "report": r });
    rendered(text, json, &[row])
}

pub fn invert(cat: &Catalog, cfg: &RunConfig) -> CliResult<Rendered> {
    let d = cat.resolve(cfg.entry_name()?, &cfg.params)?;
    let t = cfg.t.ok_or_else(|| CliError::Usage("invert needs --t".into()))?;
    let z = zeta_handle(&d)?;
    let tz = if z.kind == ZetaKind::Distance { tube_from_distance(&z, d.omega_volume)? } else { z };
    let n = d.ambient_dim as f64;
    let c = cfg.c.unwrap_or(0.5 * (tz.dimension_hint + n + 1.0));
    let inv = mellin_invert_tube(&tz, t, c, cfg.big_t)?;
    let oracle = d.oracle().map_or(f64::NAN, |o| o.volume(t));
    let row = InvertRow {
        t,
        c,
        im_max: cfg.big_t,
        value: inv.value,
        oracle,
        abs_err: (inv.value - oracle).abs(),
        imag_residual: inv.imag_residual,
    };
    let text = format!(
        "{}: V({t}) from the line Re s = {c}, |Im s| <= {}: {} (oracle {}, abs err {:e}, imaginary residual {:e})\n",
        d.name, cfg.big_t, row.value, row.oracle, row.abs_err, row.imag_residual
    );
    let json = serde_json::to_value(row)?;
    rendered(text, json, &[row])
}
