use fzeta::complexcore::moran::find_moran_roots_with;
use fzeta::complexcore::*;
use proptest::prelude::*;

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn arb_s() -> impl Strategy<Value = C> {
    (-6.0..6.0f64, -30.0..30.0f64).prop_map(|(x, y)| C::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn special_functions_are_conjugate_symmetric(s in arb_s()) {
        prop_assume!((s - 1.0).norm() > 1e-3);
        let pairs = [
            (gamma(s.conj()), gamma(s)),
            (riemann_zeta(s.conj()), riemann_zeta(s)),
            (hurwitz_zeta(s.conj(), 0.3), hurwitz_zeta(s, 0.3)),
            (pochhammer(s.conj(), 7), pochhammer(s, 7)),
        ];
        for (a, b) in pairs {
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!(close(a, b.conj(), 1e-12), "{a} vs {}", b.conj());
            }
        }
    }

    #[test]
    fn pochhammer_recurrence(s in arb_s(), k in -10i64..=10) {
        let lhs = pochhammer(s, k + 1).unwrap();
        let rhs = pochhammer(s, k).unwrap() * (s + k as f64);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
    }

    #[test]
    fn laurent_reconstruction(a in -3.0..3.0f64, b in -3.0..3.0f64, order in 1usize..=3, r in 0.05..0.4f64) {
        // pole of the given order at ω, a simple pole 1 away, and an entire part
        let w = C::new(a, b);
        let f = |s: C| -> fzeta::Result<C> {
            Ok((s - w).powi(-(order as i32)) * 2.5 + 1.0 / (s - w - 1.0) + (s * 0.3).exp())
        };
        let lx = contour_laurent(&f, w, r, 30).unwrap();
        prop_assert_eq!(lx.dimension().map(|d| d.order), Some(order));
        for j in 0..12 {
            let s = w + C::from_polar(0.5 * r, 0.5 + j as f64);
            let v = f(s).unwrap();
            prop_assert!((lx.eval(s) - v).norm() <= 1e-8 * v.norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn moran_count_stable_under_refinement(r1 in 0.1..0.5f64, r2 in 0.1..0.45f64, top in 5.0..40.0f64) {
        let ratios = [r1, r2];
        let rect = Rectangle::new(-2.0, 1.5, -top, top).unwrap();
        let a = find_moran_roots_with(&ratios, &rect, 1).unwrap();
        let b = find_moran_roots_with(&ratios, &rect, 2).unwrap();
        let count = |v: &[ComplexDimension]| v.iter().map(|d| d.order).sum::<usize>();
        prop_assert_eq!(count(&a), count(&b));
        for d in &a {
            prop_assert!(a.iter().any(|e| (e.location - d.location.conj()).norm() < 1e-10));
            let f: C = ratios.iter().map(|r| (d.location * r.ln()).exp()).sum();
            prop_assert!((f - 1.0).norm() < 1e-10);
        }
    }
}
