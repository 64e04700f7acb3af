//! One function per claim. Each returns the evidence and whether it supports
//! the registry's expected conclusion; `Err` means the check could not run.

use serde_json::{json, Value};

use super::{AuditConfig, Evidence, Outcome};
use crate::expr::Expr;
use crate::hydrogen::{
    hydrino_table, solve_orbit, stability_bound_check, subluminal_cutoff, uniqueness_scan,
    QuantizationMode, StabilityVerdict,
};
use crate::parse::parse_expr;
use crate::radial::{admissibility, wronskian_scan};
use crate::symcalc::{
    apply_operator, differentiate, eval_numeric, residual_with_tolerance, simplify, DiffOperator,
    EvalPoint,
};
use crate::weakform::{
    check_candidate, delta_identity_check, delta_identity_mollified, TestFunction, WeakSettings,
    WeakVerdict,
};

type CheckResult = Result<Outcome, String>;

pub(crate) fn run(id: &str, cfg: &AuditConfig) -> CheckResult {
    match id {
        "C1" => c1_uniqueness(cfg),
        "C2" => c2_monopole(cfg),
        "C3" => c3_time_dependent(cfg),
        "C4" => c4_euler_general(cfg),
        "C5" => c5_orbit_sphere(cfg),
        "C6" => c6_delta_identity(cfg),
        "C7" => c7_hydrino_cutoff(cfg),
        "C8" => c8_fractional_nu(cfg),
        "C9" => c9_stability(cfg),
        other => Err(format!("no check registered for {other}")),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn parse(s: &str) -> Result<Expr, String> {
    parse_expr(s).map_err(|e| e.render(s))
}

fn outcome(holds: bool, evidence: Evidence, notes: Vec<String>) -> CheckResult {
    Ok(Outcome {
        holds,
        evidence,
        notes,
    })
}

fn c1_uniqueness(cfg: &AuditConfig) -> CheckResult {
    let k = &cfg.constants;
    let h = &cfg.hydrogen;
    let a = k.bohr_radius;
    let scan = uniqueness_scan(
        QuantizationMode::Cqm,
        h.scan_range.0 * a,
        h.scan_range.1 * a,
        h.scan_samples,
        k,
    )
    .map_err(err)?;
    let root_offset = scan.roots.first().map(|r| (r / a - 1.0).abs());
    let unique = scan.count() == 1 && root_offset.is_some_and(|d| d < 1e-3);

    let excl = uniqueness_scan(
        QuantizationMode::Cqm,
        h.exclusion_range.0 * a,
        h.exclusion_range.1 * a,
        h.scan_samples,
        k,
    )
    .map_err(err)?;

    // the scanner does find orbits when the condition admits them
    let bohr3 = uniqueness_scan(
        QuantizationMode::bohr(3).map_err(err)?,
        h.scan_range.0 * a,
        h.scan_range.1 * a,
        h.scan_samples,
        k,
    )
    .map_err(err)?;
    let bohr3_ok = bohr3.count() == 1 && (bohr3.roots[0] / (9.0 * a) - 1.0).abs() < 1e-3;

    let r1 = solve_orbit(QuantizationMode::Cqm, k).radius;
    let closed_form_offset = (r1 / a - 1.0).abs();
    let mut bohr_error: f64 = 0.0;
    for n in 1..=h.bohr_n_max {
        let rn = solve_orbit(QuantizationMode::bohr(n).map_err(err)?, k).radius;
        bohr_error = bohr_error.max((rn / (f64::from(n * n) * a) - 1.0).abs());
    }

    let holds = unique && excl.count() == 0 && bohr3_ok && bohr_error < 1e-10;
    let ev = Evidence::from([
        ("scan_range_bohr".into(), json!(h.scan_range)),
        ("scan_samples".into(), json!(h.scan_samples)),
        ("root_count".into(), json!(scan.count())),
        ("root_over_a_h".into(), json!(scan.roots.iter().map(|r| r / a).collect::<Vec<_>>())),
        ("root_relative_offset".into(), json!(root_offset)),
        ("exclusion_range_bohr".into(), json!(h.exclusion_range)),
        ("exclusion_root_count".into(), json!(excl.count())),
        ("bohr3_roots_over_a_h".into(), json!(bohr3.roots.iter().map(|r| r / a).collect::<Vec<_>>())),
        ("closed_form_radius_m".into(), json!(r1)),
        ("closed_form_relative_offset".into(), json!(closed_form_offset)),
        ("bohr_radius_relative_error".into(), json!(bohr_error)),
        ("bohr_n_max".into(), json!(h.bohr_n_max)),
    ]);
    outcome(holds, ev, Vec::new())
}

/// Operator and sample points shared by the angular-time claims.
fn angular_time_setup(cfg: &AuditConfig) -> (DiffOperator, Vec<EvalPoint>) {
    let s = &cfg.samples;
    let op = DiffOperator::angular_time_on_orbit(Expr::symbol("r_n"), Expr::symbol("omega_n"));
    let mut pts = Vec::new();
    for &theta in &s.theta {
        for &phi in &s.phi {
            for &t in &s.t {
                pts.push(EvalPoint::from([
                    ("theta", theta),
                    ("phi", phi),
                    ("t", t),
                    ("r_n", s.r_n),
                    ("omega_n", s.omega_n),
                ]));
            }
        }
    }
    (op, pts)
}

/// Symbolic residual after `a^2 -> -l(l+1)` for `Y(l,0) exp(i a omega_n t)`.
fn separation_square_reading(op: &DiffOperator, l: u32) -> Result<Expr, String> {
    let cand = parse(&format!("Y({l},0)*exp(i*a*omega_n*t)"))?;
    let res = apply_operator(op, &cand).map_err(err)?;
    let a2 = Expr::symbol("a").powi(2).map_err(err)?;
    let ll = Expr::int(-i64::from(l * (l + 1)));
    Ok(simplify(&res.substitute(&a2, &ll).map_err(err)?))
}

/// Symbolic residual with `a = i sqrt(l(l+1))` substituted before differentiating.
fn separation_imaginary_reading(op: &DiffOperator, l: u32) -> Result<Expr, String> {
    let cand = parse(&format!("Y({l},0)*exp(i*(i*({})^(1/2))*omega_n*t)", l * (l + 1)))?;
    Ok(simplify(&apply_operator(op, &cand).map_err(err)?))
}

fn c2_monopole(cfg: &AuditConfig) -> CheckResult {
    let (op, pts) = angular_time_setup(cfg);
    let cand = parse("Y(0,0)")?;
    let res = residual_with_tolerance(&op, &cand, &pts, cfg.tolerances.tol_sym).map_err(err)?;

    let mut square = Vec::new();
    let mut imaginary = Vec::new();
    for l in 1..=3 {
        square.push(separation_square_reading(&op, l)?);
        imaginary.push(separation_imaginary_reading(&op, l)?);
    }
    let separation_ok = square.iter().chain(&imaginary).all(Expr::is_zero);
    let ev = Evidence::from([
        ("candidate".into(), json!(cand.to_string())),
        ("operator".into(), json!(op.name())),
        ("symbolic_residual".into(), json!(res.symbolic.to_string())),
        ("sample_residuals".into(), json!(res.values)),
        ("tolerance".into(), json!(res.tolerance)),
        (
            "separation_residual_a_squared".into(),
            json!(square.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
        ),
        (
            "separation_residual_a_imaginary".into(),
            json!(imaginary.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
        ),
    ]);
    outcome(
        res.passes() && separation_ok,
        ev,
        vec![
            "separation constant a = sqrt(-l(l+1)) checked both as a^2 = -l(l+1) and as a = i sqrt(l(l+1)), l = 1..3".into(),
        ],
    )
}

/// `(1/r_n^2) Laplacian_S2 f + (1/v^2) d2f/dt2` by central differences in theta, phi and t.
fn fd_angular_time(e: &Expr, p: &EvalPoint, r_n: f64, v: f64) -> Result<f64, String> {
    const H: f64 = 1e-3;
    let f = |dth: f64, dph: f64, dt: f64| -> Result<f64, String> {
        let mut q = p.clone();
        q.set("theta", p.get("theta").unwrap_or(0.0) + dth);
        q.set("phi", p.get("phi").unwrap_or(0.0) + dph);
        q.set("t", p.get("t").unwrap_or(0.0) + dt);
        eval_numeric(e, &q).map_err(err)
    };
    let f0 = f(0.0, 0.0, 0.0)?;
    let second = |plus: f64, minus: f64| (plus - 2.0 * f0 + minus) / (H * H);
    let (tp, tm) = (f(H, 0.0, 0.0)?, f(-H, 0.0, 0.0)?);
    let f_tt_theta = second(tp, tm);
    let f_theta = (tp - tm) / (2.0 * H);
    let f_phiphi = second(f(0.0, H, 0.0)?, f(0.0, -H, 0.0)?);
    let f_tt = second(f(0.0, 0.0, H)?, f(0.0, 0.0, -H)?);
    let theta = p.get("theta").unwrap_or(0.0);
    let lap = f_tt_theta + f_theta / theta.tan() + f_phiphi / theta.sin().powi(2);
    Ok(lap / (r_n * r_n) + f_tt / (v * v))
}

fn c3_time_dependent(cfg: &AuditConfig) -> CheckResult {
    let tol = &cfg.tolerances;
    let s = &cfg.samples;
    let (op, pts) = angular_time_setup(cfg);
    let cand = parse("Y(0,0) + Re(Y(1,0)*(1 + exp(i*omega_n*t)))")?;
    let res = residual_with_tolerance(&op, &cand, &pts, tol.tol_sym).map_err(err)?;
    let v = s.omega_n * s.r_n;
    let fd = pts
        .iter()
        .map(|p| fd_angular_time(&cand, p, s.r_n, v))
        .collect::<Result<Vec<_>, _>>()?;
    let fd_gap = res
        .values
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let min_abs = res.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let refuted = !res.passes() && min_abs > tol.refute_min;
    let ev = Evidence::from([
        ("candidate".into(), json!(cand.to_string())),
        ("operator".into(), json!(op.name())),
        ("symbolic_residual".into(), json!(res.symbolic.to_string())),
        ("sample_residuals".into(), json!(res.values)),
        ("min_abs_residual".into(), json!(min_abs)),
        ("finite_difference_residuals".into(), json!(fd)),
        ("finite_difference_gap".into(), json!(fd_gap)),
        ("tolerance".into(), json!(res.tolerance)),
    ]);
    outcome(
        refuted && fd_gap < tol.fd_crosscheck,
        ev,
        vec![
            "omega in the time factor is taken as omega_n, the orbital angular frequency".into(),
            "the residual equals -(Y(1,0)/r_n^2)(2 + 3 cos(omega_n t)) and vanishes at no sample".into(),
        ],
    )
}

fn weak_settings(cfg: &AuditConfig) -> WeakSettings {
    WeakSettings {
        tolerance: cfg.tolerances.weak,
        mollifier_sigmas: cfg.weak.mollifier_sigmas.clone(),
        ..WeakSettings::default()
    }
}

fn c4_euler_general(cfg: &AuditConfig) -> CheckResult {
    let w = &cfg.weak;
    let op = DiffOperator::euler();
    let cand = parse("c1 + c2/r")?;
    let symbolic = apply_operator(&op, &cand).map_err(err)?;

    // 1 and 1/r are independent: W = -1/r^2 never vanishes on (0, inf)
    let wronskian = simplify(&(-differentiate(&parse("1/r")?, "r").map_err(err)?));
    let wronskian_nonzero = !wronskian.is_zero() && !wronskian.free_symbols().is_empty();

    let r_n = w.r_n.first().copied().unwrap_or(1.0);
    let at = EvalPoint::from([("c1", w.c1), ("c2", w.c2), ("r_n", r_n)]);
    let members = w.battery.build(r_n);
    let settings = weak_settings(cfg);
    let report = check_candidate(&op, &cand, &at, &members, &settings).map_err(err)?;
    let max_raw = report.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));

    // control: r is not a solution, so the battery must reject it
    let control = check_candidate(&op, &parse("r")?, &at, &members, &settings).map_err(err)?;

    let holds = symbolic.is_zero()
        && wronskian_nonzero
        && report.verdict == WeakVerdict::Solves
        && max_raw < cfg.tolerances.weak
        && control.verdict == WeakVerdict::Fails;
    let ev = Evidence::from([
        ("candidate".into(), json!(cand.to_string())),
        ("symbolic_residual".into(), json!(symbolic.to_string())),
        ("basis_wronskian".into(), json!(wronskian.to_string())),
        ("battery_size".into(), json!(members.len())),
        ("max_normalized".into(), json!(report.max_normalized())),
        ("max_raw".into(), json!(max_raw)),
        ("control_candidate".into(), json!("r")),
        ("control_max_normalized".into(), json!(control.max_normalized())),
    ]);
    outcome(holds, ev, vec!["domain is r in (0, inf); test functions vanish near the origin".into()])
}

fn c5_orbit_sphere(cfg: &AuditConfig) -> CheckResult {
    let tol = &cfg.tolerances;
    let op = DiffOperator::euler();
    let cand = parse("delta(r - r_n)/r")?;
    let settings = weak_settings(cfg);
    let mut holds = !cfg.weak.r_n.is_empty();
    let mut per_radius = Vec::new();
    let mut closed_form = None;
    for &r_n in &cfg.weak.r_n {
        let at = EvalPoint::from([("r_n", r_n)]);
        let members = cfg.weak.battery.build(r_n);
        let report = check_candidate(&op, &cand, &at, &members, &settings).map_err(err)?;
        let gap = report.path_disagreement().unwrap_or(f64::INFINITY);
        let closed_gap = report
            .closed_form_values
            .as_ref()
            .map(|cf| {
                cf.iter()
                    .zip(&report.values)
                    .zip(&report.scales)
                    .map(|((c, v), s)| (c - v).abs() / s)
                    .fold(0.0, f64::max)
            })
            .unwrap_or(f64::INFINITY);
        let orders: Vec<Option<f64>> = report.mollifier_orders.clone().unwrap_or_default();
        holds &= report.verdict == WeakVerdict::Fails
            && report.max_normalized() > tol.weak_refute
            && gap < tol.path_agreement
            && closed_gap < tol.path_agreement;
        if closed_form.is_none() {
            closed_form = report.sifted_closed_form.as_ref().map(|e| e.to_string());
        }
        per_radius.push(json!({
            "r_n": r_n,
            "max_normalized": report.max_normalized(),
            "normalized": report.normalized,
            "path_disagreement": gap,
            "closed_form_gap": closed_gap,
            "mollifier_orders": orders,
        }));
    }
    let ev = Evidence::from([
        ("candidate".into(), json!(cand.to_string())),
        ("sifted_closed_form".into(), json!(closed_form)),
        ("per_radius".into(), Value::Array(per_radius)),
    ]);
    outcome(
        holds,
        ev,
        vec!["sifting and zero-width extrapolation of mollified quadrature are independent routes".into()],
    )
}

/// Whole-line test functions for the delta identity.
fn identity_test_functions() -> [TestFunction; 5] {
    [
        TestFunction::gaussian(0.0, 1.0),
        TestFunction::polynomial(0.2, 1.0),
        TestFunction::gaussian(-0.3, 0.8),
        TestFunction::polynomial(0.0, 0.5),
        TestFunction::gaussian(0.1, 2.0),
    ]
}

fn c6_delta_identity(cfg: &AuditConfig) -> CheckResult {
    let tol = cfg.tolerances.delta_identity;
    let settings = WeakSettings {
        mollifier_sigmas: cfg.weak.identity_sigmas.clone(),
        ..weak_settings(cfg)
    };
    let mut max_gap: f64 = 0.0;
    let mut max_mollified_gap: f64 = 0.0;
    let mut rows = Vec::new();
    for n in 1..=3 {
        for phi in identity_test_functions() {
            let (lhs, rhs) = delta_identity_check(n, &phi);
            let moll = delta_identity_mollified(n, &phi, &settings).map_err(err)?;
            let scale = rhs.abs().max(1.0);
            max_gap = max_gap.max((lhs - rhs).abs() / scale);
            max_mollified_gap = max_mollified_gap.max((moll - rhs).abs() / scale);
            rows.push(json!({ "n": n, "center": phi.center, "width": phi.width, "lhs": lhs, "rhs": rhs, "mollified": moll }));
        }
    }
    let ev = Evidence::from([
        ("pairings".into(), Value::Array(rows)),
        ("max_relative_gap".into(), json!(max_gap)),
        ("max_mollified_gap".into(), json!(max_mollified_gap)),
    ]);
    outcome(
        max_gap < tol && max_mollified_gap < tol,
        ev,
        vec!["checked in the form x^n delta^(n)(x) paired with test functions on the real line".into()],
    )
}

fn c7_hydrino_cutoff(cfg: &AuditConfig) -> CheckResult {
    let k = &cfg.constants;
    let table = hydrino_table(cfg.hydrogen.k_max, k).map_err(err)?;
    let cutoff = subluminal_cutoff(&table).ok_or("no subluminal level")?;
    let expected_k = (1.0 / k.alpha).floor() as u32;
    let energy_error = table
        .iter()
        .map(|lv| (lv.binding_energy / (k.rydberg_energy * f64::from(lv.k).powi(2)) - 1.0).abs())
        .fold(0.0, f64::max);
    let subluminal_consistent = table.iter().all(|lv| lv.subluminal == (lv.k <= expected_k));
    let ev = Evidence::from([
        ("k_max".into(), json!(cfg.hydrogen.k_max)),
        ("cutoff_k".into(), json!(cutoff.k)),
        ("floor_inverse_alpha".into(), json!(expected_k)),
        ("cutoff_binding_energy_ev".into(), json!(cutoff.binding_energy)),
        ("cutoff_velocity_over_c".into(), json!(cutoff.orbital_velocity / k.light_speed)),
        ("binding_energy_relative_error".into(), json!(energy_error)),
    ]);
    outcome(
        cutoff.k == expected_k && energy_error < 1e-12 && subluminal_consistent,
        ev,
        vec!["orbital speed at level k is k alpha c, so the subluminal table ends at floor(1/alpha)".into()],
    )
}

fn c8_fractional_nu(cfg: &AuditConfig) -> CheckResult {
    let rc = &cfg.radial;
    let tol = cfg.tolerances.eigenvalue;
    let scan = wronskian_scan(rc.l, rc.nu_min, rc.nu_max, rc.steps, rc.r_match).map_err(err)?;
    let lowest = f64::from(rc.l + 1);
    let zeros_integral = scan
        .zeros
        .iter()
        .all(|z| (z - z.round()).abs() < tol && z.round() >= lowest);
    let below_one = scan.zeros.iter().filter(|z| **z < 1.0 - tol).count();
    let expected: Vec<f64> = (1..)
        .map(f64::from)
        .skip_while(|n| *n < rc.nu_min.max(lowest))
        .take_while(|n| *n <= rc.nu_max)
        .collect();
    let all_found = scan.zeros.len() == expected.len();

    let fractional = admissibility(rc.fractional_nu, rc.l).map_err(err)?;
    let ground = admissibility(lowest, rc.l).map_err(err)?;
    let holds = zeros_integral
        && below_one == 0
        && all_found
        && !fractional.admissible
        && ground.admissible;
    let ev = Evidence::from([
        ("l".into(), json!(rc.l)),
        ("scan_range".into(), json!([rc.nu_min, rc.nu_max])),
        ("scan_steps".into(), json!(rc.steps)),
        ("r_match".into(), json!(rc.r_match)),
        ("wronskian_zeros".into(), json!(scan.zeros)),
        ("zeros_below_one".into(), json!(below_one)),
        ("fractional_nu".into(), json!(rc.fractional_nu)),
        ("fractional_admissible".into(), json!(fractional.admissible)),
        ("fractional_failure_modes".into(), json!(fractional.failure_modes)),
        ("fractional_criteria".into(), serde_json::to_value(fractional.criteria).map_err(err)?),
        ("fractional_wronskian".into(), json!(fractional.wronskian)),
        ("integer_nu_admissible".into(), json!(ground.admissible)),
    ]);
    let mut notes = Vec::new();
    if fractional.criteria.square_integrable {
        notes.push(format!(
            "the decaying solution at nu = {} has finite norm; it fails at the origin, and the regular solution grows",
            rc.fractional_nu
        ));
    }
    outcome(holds, ev, notes)
}

fn c9_stability(cfg: &AuditConfig) -> CheckResult {
    let k = &cfg.constants;
    let table = hydrino_table(cfg.hydrogen.k_max, k).map_err(err)?;
    let mut within = Vec::new();
    let mut exceeding = 0usize;
    for lv in &table {
        match stability_bound_check(lv, k) {
            StabilityVerdict::WithinBound => within.push(lv.k),
            StabilityVerdict::ExceedsBound => exceeding += 1,
        }
    }
    let ev = Evidence::from([
        ("stability_bound_ev".into(), json!(k.stability_bound)),
        ("k_max".into(), json!(cfg.hydrogen.k_max)),
        ("levels_within_bound".into(), json!(within)),
        ("levels_exceeding_bound".into(), json!(exceeding)),
        ("k2_binding_energy_ev".into(), json!(table.get(1).map(|lv| lv.binding_energy))),
    ]);
    outcome(within == [1] && exceeding == table.len() - 1, ev, Vec::new())
}
