use fzeta::complexcore::{contour_laurent, C};
use fzeta::geometry::*;
use fzeta::tubeformula::*;
use fzeta::zetacat::*;
use proptest::prelude::*;

fn entry(p: EntryParams) -> ZetaHandle {
    catalog_zeta(&RfdDescriptor::new(p).unwrap()).unwrap()
}

fn window(z: &ZetaHandle) -> Window {
    Window::new(z.dimension_hint - 1.37, Some(30.0))
}

#[test]
fn simple_poles_collapse_to_single_terms() {
    for p in [EntryParams::CantorGraph, EntryParams::CantorString, EntryParams::Gasket] {
        let z = entry(p);
        let n = z.ambient_dim as f64;
        for d in complex_dimensions(&z, Some(&window(&z))).unwrap() {
            assert_eq!(d.order, 1, "{} at {}", z.name, d.location);
            let terms = residue_term(&z, &d, 0).unwrap();
            assert_eq!(terms.len(), 1);
            let f = |s: C| z.evaluate(s);
            let res = contour_laurent(&f, d.location, 0.1, 2).unwrap().coeff(-1);
            let want = res / (n - d.location);
            assert!((terms[0].coefficient - want).norm() <= 1e-10 * want.norm().max(1.0), "{}: {} vs {want}", z.name, terms[0].coefficient);
            assert_eq!(terms[0].log_power, 0);
        }
    }
}

#[test]
fn cantor_string_content_bounds_bracket_the_residue() {
    let z = entry(EntryParams::CantorString);
    let dims = complex_dimensions(&z, Some(&window(&z))).unwrap();
    let r = minkowski_report(&z, &dims).unwrap();
    assert_eq!(r.measurable, Measurability::NonmeasurableOscillatory);
    let d = r.dimension;
    let res = dims.iter().find(|x| (x.location - d).norm() < 1e-9).unwrap().residue().re / (1.0 - d);
    assert!(r.content_lower < res && res < r.content_upper);
    // extrema of t^{D−1} V(t) over two periods deep in the scale range
    let s = FractalString::cantor();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for t in log_grid(1e-6 / 9.0, 1e-6, 4001) {
        let g = string_tube_volume(&s, t) * t.powf(d - 1.0);
        lo = lo.min(g);
        hi = hi.max(g);
    }
    assert!((lo - r.content_lower).abs() <= 1e-3 * lo, "{lo} vs {}", r.content_lower);
    assert!((hi - r.content_upper).abs() <= 1e-3 * hi, "{hi} vs {}", r.content_upper);
}

#[test]
fn windowed_expansion_error_decays_at_the_screen_rate() {
    let z = entry(EntryParams::Gasket);
    let o = RfdDescriptor::new(EntryParams::Gasket).unwrap().oracle().unwrap();
    let w = Window::new(0.5, None);
    let exp = tube_expansion(&z, Some(&w), 0).unwrap();
    assert_eq!(exp.error_exponent, Some(1.5));
    for t in [1e-3, 1e-2, 0.1] {
        let v = evaluate_expansion(&exp, t, 200).unwrap();
        let err = (v.value - o.volume(t)).abs() - v.tail_bound;
        assert!(err <= 10.0 * t.powf(1.5), "t={t}: {err}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn level_consistency(t in 1e-4..0.28f64) {
        for p in [EntryParams::Gasket, EntryParams::CantorGraph, EntryParams::HalfSquareGeometric] {
            let z = entry(p);
            let e0 = tube_expansion(&z, None, 0).unwrap();
            let e1 = differentiate(&tube_expansion(&z, None, 1).unwrap()).unwrap();
            let (a, b) = (evaluate_resummed(&e1, t).unwrap(), evaluate_resummed(&e0, t).unwrap());
            prop_assert!((a - b).abs() <= 1e-8 * b.abs(), "{}: {a} vs {b}", z.name);
        }
    }

    #[test]
    fn expansions_are_real(t in 1e-5..0.28f64, k in 0usize..=2) {
        for p in [EntryParams::CantorString, EntryParams::Gasket, EntryParams::CantorGraph, EntryParams::SsNest { a: 0.5 }] {
            let z = entry(p);
            let e = tube_expansion(&z, None, k).unwrap();
            let v = evaluate_expansion(&e, t, 300).unwrap();
            prop_assert!(v.imag_residual <= 1e-9 * v.value.abs().max(1.0));
        }
    }
}
