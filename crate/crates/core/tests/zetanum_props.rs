use fzeta::complexcore::C;
use fzeta::geometry::*;
use fzeta::zetacat::*;
use fzeta::zetanum::*;

struct Empty;

impl TubeOracle for Empty {
    fn volume(&self, _t: f64) -> f64 {
        0.0
    }
}

fn gasket_region() -> McRegion {
    McRegion { bbox: (0.0, 1.0, 0.0, 0.5 * 3f64.sqrt()), delta: None, dimension: 3f64.ln() / 2f64.ln(), depth: 20 }
}

#[test]
fn monte_carlo_is_reproducible_across_thread_counts() {
    let s = C::new(2.4, -3.0);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| mc_distance_zeta(&PlanarRecipe::GasketInner, &gasket_region(), s, &McConfig::new(50_000, 42)).unwrap())
    };
    let a = run(1);
    assert_eq!(a, run(2));
    assert_eq!(a, run(4));
}

#[test]
fn monte_carlo_standard_error_is_honest() {
    let s = C::new(2.6, 0.5);
    let ests: Vec<McEstimate> = (0..30)
        .map(|k| mc_distance_zeta(&PlanarRecipe::GasketInner, &gasket_region(), s, &McConfig::new(20_000, 900 + k)).unwrap())
        .collect();
    for part in [|e: &McEstimate| (e.value.re, e.std_err_re), |e: &McEstimate| (e.value.im, e.std_err_im)] {
        let v: Vec<(f64, f64)> = ests.iter().map(part).collect();
        let mean = v.iter().map(|x| x.0).sum::<f64>() / 30.0;
        let spread = (v.iter().map(|x| (x.0 - mean).powi(2)).sum::<f64>() / 29.0).sqrt();
        let reported = v.iter().map(|x| x.1).sum::<f64>() / 30.0;
        let ratio = spread / reported;
        assert!((0.5..=2.0).contains(&ratio), "spread/std-err = {ratio}");
    }
}

#[test]
fn monte_carlo_matches_inner_gasket_zeta() {
    // inner gasket: the spray part of the catalog zeta, i.e. minus the outer terms
    let z = catalog_zeta(&RfdDescriptor::new(EntryParams::Gasket).unwrap()).unwrap();
    let s = C::new(2.3, 0.0);
    let outer = 2.0 * std::f64::consts::PI / s + 3.0 / (s - 1.0);
    let want = z.evaluate(s).unwrap() - outer;
    let e = mc_distance_zeta(&PlanarRecipe::GasketInner, &gasket_region(), s, &McConfig::new(400_000, 3)).unwrap();
    assert!((e.value.re - want.re).abs() <= 3.0 * e.std_err_re, "{} vs {want} ± {}", e.value, e.std_err_re);
}

#[test]
fn tube_zeta_of_empty_tube_is_zero() {
    assert_eq!(numeric_tube_zeta(&Empty, C::new(1.5, 2.0), 1.0, 2).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn segment_tube_zeta_closed_form() {
    let d = 2.0f64;
    for s in [C::new(1.3, 0.0), C::new(2.0, 4.0), C::new(1.05, -9.0)] {
        let want = 2.0 * (s * d.ln()).exp() / s + ((s - 1.0) * d.ln()).exp() / (s - 1.0);
        let got = numeric_tube_zeta(&SegmentOracle, s, d, 1).unwrap();
        assert!((got - want).norm() <= 1e-8 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn inversion_residual_and_convergence() {
    let z = catalog_zeta(&RfdDescriptor::new(EntryParams::CantorString).unwrap()).unwrap();
    let tz = tube_from_distance(&z, 1.0).unwrap();
    let exact = string_tube_volume(&FractalString::cantor(), 0.1);
    let mut last = f64::INFINITY;
    for t_max in [2.5e3, 5e3, 1e4] {
        let v = mellin_invert_tube(&tz, 0.1, 0.8, t_max).unwrap();
        assert!(v.imag_residual <= 1e-6 * v.value.abs());
        let err = (v.value - exact).abs();
        assert!(err < last, "T={t_max}: {err} after {last}");
        last = err;
    }
    assert!(mellin_invert_tube(&tz, 1.5, 0.8, 1e3).is_err());
}
