use fzeta::geometry::*;
use proptest::prelude::*;

fn oracles() -> Vec<RfdDescriptor> {
    [
        EntryParams::Segment,
        EntryParams::CantorString,
        EntryParams::AString { a: 0.7 },
        EntryParams::Gasket,
        EntryParams::CantorGraph,
        EntryParams::HalfSquare,
        EntryParams::SsNest { a: 0.4 },
        EntryParams::FractalNest { a: 1.5 },
        EntryParams::Chirp { alpha: -0.5, beta: 1.0 },
    ]
    .into_iter()
    .map(|p| RfdDescriptor::new(p).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracles_monotone_and_bounded(u in 0.0..1.0f64, v in 0.0..1.0f64) {
        for d in oracles() {
            let o = d.oracle().unwrap();
            let (a, b) = (u.min(v) * d.delta, u.max(v) * d.delta);
            let (va, vb) = (o.volume(a), o.volume(b));
            prop_assert!(va <= vb, "{}: V({a}) = {va} > V({b}) = {vb}", d.name);
            prop_assert!(vb <= d.omega_volume * (1.0 + 1e-12), "{}: {vb} > {}", d.name, d.omega_volume);
        }
    }

    #[test]
    fn string_scaling_covariance(lambda in 0.05..20.0f64, t in 1e-6..2.0f64) {
        let s = FractalString::cantor();
        let sl = s.scaled(lambda).unwrap();
        let lhs = string_tube_volume(&sl, t);
        let rhs = lambda * string_tube_volume(&s, t / lambda);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1e-300));
    }

    #[test]
    fn cantor_string_and_spray_agree(t in 0.0..0.5f64) {
        prop_assume!(t > 0.0);
        let a = string_tube_volume(&FractalString::cantor(), t);
        let b = spray_tube_volume(&SelfSimilarSpray::cantor_string(), t);
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn pixel_bound_shrinks_with_resolution() {
    for (set, t) in [(PlanarRecipe::Gasket, 0.05), (PlanarRecipe::HalfSquare, 0.03), (PlanarRecipe::SelfSimilarNest { a: 0.5 }, 0.02)] {
        let a = pixel_tube_volume(&set, t, 8, 1024).unwrap();
        let b = pixel_tube_volume(&set, t, 8, 2048).unwrap();
        assert!(a.error_bound >= 1.8 * b.error_bound, "{set:?}: {} -> {}", a.error_bound, b.error_bound);
    }
}

#[test]
fn pixels_bracket_exact_volumes() {
    for p in [EntryParams::Gasket, EntryParams::HalfSquare, EntryParams::SsNest { a: 0.5 }] {
        let d = RfdDescriptor::new(p).unwrap();
        let (o, set) = (d.oracle().unwrap(), d.planar().unwrap());
        for t in [0.02, 0.07] {
            let px = pixel_tube_volume(&set, t, 9, 1024).unwrap();
            let v = o.volume(t);
            assert!((px.value - v).abs() <= px.error_bound, "{} t={t}: {} vs {v} ± {}", d.name, px.value, px.error_bound);
        }
    }
}
