mod support;

use std::f64::consts::PI;

use hydrino_audit::hydrogen::{hydrino_level, solve_orbit, QuantizationMode};
use hydrino_audit::radial::wronskian_match;
use hydrino_audit::symcalc::harmonics::real_sph_harmonic;
use hydrino_audit::symcalc::{eval_numeric, expand, simplify};
use hydrino_audit::{expr_equal, parse_expr, print_expr, PhysicalConstants};
use proptest::prelude::*;
use support::{any_expr, derivative_check, point, rng, smooth_expr, DerivativeCheck};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let e = any_expr(&mut rng(seed), 4);
        let text = print_expr(&e);
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(err.render(&text)))?;
        prop_assert!(expr_equal(&back, &e), "{text} reparsed as {back:?}");
    }

    #[test]
    fn parser_never_panics(input in "[-+*/^()xy0-9a-z_ .,']{0,24}") {
        let _ = parse_expr(&input);
    }

    #[test]
    fn derivative_matches_finite_differences(seed in any::<u64>(), x in 0.6..1.4f64, y in 0.6..1.4f64) {
        let e = smooth_expr(&mut rng(seed), 3);
        if let DerivativeCheck::Gap(gap) = derivative_check(&e, "x", &point(x, y)) {
            prop_assert!(gap < 1e-6, "{e}: gap {gap}");
        }
    }

    #[test]
    fn simplify_and_expand_preserve_values(seed in any::<u64>(), x in 0.5..1.5f64, y in 0.5..1.5f64) {
        let e = smooth_expr(&mut rng(seed), 3);
        let at = point(x, y);
        if let Ok(v) = eval_numeric(&e, &at) {
            let s = eval_numeric(&simplify(&e), &at).unwrap();
            let x = eval_numeric(&expand(&e), &at).unwrap();
            prop_assert!(close(v, s, 1e-9), "{e}: {v} vs simplified {s}");
            prop_assert!(close(v, x, 1e-9), "{e}: {v} vs expanded {x}");
        }
    }

    #[test]
    fn simplify_is_idempotent(seed in any::<u64>()) {
        let s = simplify(&any_expr(&mut rng(seed), 3));
        prop_assert!(expr_equal(&simplify(&s), &s));
    }

    #[test]
    fn harmonics_satisfy_eigenrelation(l in 0u32..=3, m_raw in -3i32..=3, theta in 0.3..(PI - 0.3), phi in 0.0..(2.0 * PI)) {
        let m = m_raw.clamp(-(l as i32), l as i32);
        let h = 1e-3;
        let y = |t: f64, p: f64| real_sph_harmonic(l, m, t, p);
        let y0 = y(theta, phi);
        let d_t = (y(theta + h, phi) - y(theta - h, phi)) / (2.0 * h);
        let d_tt = (y(theta + h, phi) - 2.0 * y0 + y(theta - h, phi)) / (h * h);
        let d_pp = (y(theta, phi + h) - 2.0 * y0 + y(theta, phi - h)) / (h * h);
        let lap = d_tt + d_t / theta.tan() + d_pp / theta.sin().powi(2);
        let expected = -f64::from(l * (l + 1)) * y0;
        prop_assert!((lap - expected).abs() < 1e-4, "l={l} m={m}: {lap} vs {expected}");
    }

    #[test]
    fn hydrino_levels_scale_with_k(k in 1u32..=10_000) {
        let c = PhysicalConstants::default();
        let lv = hydrino_level(k, &c);
        let kf = f64::from(k);
        prop_assert!(close(lv.binding_energy, 13.6 * kf * kf, 1e-12));
        prop_assert!(close(lv.radius * kf, c.bohr_radius, 1e-12));
        prop_assert_eq!(lv.subluminal, k <= 137);
        prop_assert_eq!(*lv.q.numer(), 1);
        prop_assert_eq!(*lv.q.denom(), i64::from(k));
    }

    #[test]
    fn bohr_orbits_scale_with_n_squared(n in 1u32..=50) {
        let c = PhysicalConstants::default();
        let r1 = solve_orbit(QuantizationMode::Cqm, &c).radius;
        let rn = solve_orbit(QuantizationMode::bohr(n).unwrap(), &c).radius;
        prop_assert!(close(rn, f64::from(n * n) * r1, 1e-13));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_wronskian_is_bounded(nu in 0.4..4.0f64, l in 0u32..=2, r_match in 1.0..3.0f64) {
        let w = wronskian_match(nu, l, r_match).unwrap();
        prop_assert!((-1.0..=1.0).contains(&w), "{w}");
    }
}
