use hydrino_audit::radial::{
    admissibility, default_match_radius, hydrogen_u, integrate_radial, stitch, wronskian_scan,
    Direction, InfinityClass, RadialProblem,
};

/// Relative error of the stitched solution against the closed form on [0.1, 20],
/// measured against max |u| so that nodes do not blow up the ratio.
fn closed_form_error(n: u32, l: u32) -> f64 {
    let p = RadialProblem::new(f64::from(n), l);
    let out = integrate_radial(&p, Direction::OutwardRegular).unwrap();
    let inw = integrate_radial(&p, Direction::InwardDecaying).unwrap();
    let s = stitch(&out, &inw, default_match_radius(&p));
    let pts: Vec<(f64, f64, f64)> = s
        .grid
        .iter()
        .zip(&s.u)
        .filter(|(r, _)| (0.1..=20.0).contains(*r))
        .map(|(r, u)| (*r, *u, hydrogen_u(n, l, *r)))
        .collect();
    // least-squares scale
    let k = pts.iter().map(|(_, u, c)| u * c).sum::<f64>() / pts.iter().map(|(_, u, _)| u * u).sum::<f64>();
    let peak = pts.iter().fold(0.0f64, |m, (_, _, c)| m.max(c.abs()));
    let nodes = pts.windows(2).any(|w| w[0].2 * w[1].2 < 0.0);
    pts.iter()
        .map(|(_, u, c)| {
            let denom = if nodes { peak } else { c.abs() };
            (u * k - c).abs() / denom
        })
        .fold(0.0, f64::max)
}

#[test]
fn integer_nu_matches_closed_forms() {
    for n in 1..=3 {
        for l in 0..n {
            let e = closed_form_error(n, l);
            assert!(e < 1e-7, "n={n} l={l}: {e:e}");
        }
    }
}

#[test]
fn node_counts() {
    for n in 1..=3u32 {
        for l in 0..n {
            let s = integrate_radial(&RadialProblem::new(f64::from(n), l), Direction::InwardDecaying).unwrap();
            assert_eq!(s.sign_changes(0.1) as u32, n - l - 1, "n={n} l={l}");
        }
    }
}

#[test]
fn frobenius_exponents() {
    for l in 0..=3 {
        let s = integrate_radial(&RadialProblem::new(2.5 + f64::from(l), l), Direction::OutwardRegular).unwrap();
        assert!((s.origin_exponent.exponent - f64::from(l + 1)).abs() < 0.01, "l={l}");
    }
    for l in 1..=3 {
        let s = integrate_radial(&RadialProblem::new(2.5 + f64::from(l), l), Direction::InwardDecaying).unwrap();
        assert!((s.origin_exponent.exponent + f64::from(l)).abs() < 0.02, "l={l}: {}", s.origin_exponent.exponent);
    }
}

#[test]
fn eigenvalue_scan_has_no_zero_below_one() {
    let scan = wronskian_scan(0, 0.3, 3.5, 200, 2.0).unwrap();
    assert_eq!(scan.samples.len(), 201);
    assert_eq!(scan.zeros.len(), 3, "{:?}", scan.zeros);
    for (z, want) in scan.zeros.iter().zip([1.0, 2.0, 3.0]) {
        assert!((z - want).abs() < 1e-3, "{z}");
    }
    assert!(scan.zeros.iter().all(|z| *z > 1.0 - 1e-3));
}

#[test]
fn fractional_states() {
    let v = admissibility(0.5, 0).unwrap();
    assert!(!v.admissible && !v.matched);
    // the decaying branch is square-integrable but tends to a nonzero constant at the origin
    assert!(v.criteria.square_integrable);
    assert!(v.inward.origin_exponent.abs() < 0.05);
    assert_eq!(v.outward.infinity_class, InfinityClass::Growing);
    let v = admissibility(0.5, 1).unwrap();
    assert!(!v.admissible);
    assert!(v.failure_modes.contains(&"square-integrable".to_string()), "{:?}", v.failure_modes);
    for nu in [0.3, 0.7, 0.9, 1.5, 2.5] {
        assert!(!admissibility(nu, 0).unwrap().admissible, "nu={nu}");
    }
}

#[test]
fn integer_states_are_admissible() {
    for n in 1..=3u32 {
        for l in 0..n {
            let v = admissibility(f64::from(n), l).unwrap();
            assert!(v.admissible && v.failure_modes.is_empty(), "n={n} l={l}: {v:?}");
        }
    }
}
