use hydrino_audit::claims::{run_all, run_claim, AuditConfig, Verdict, REGISTRY};

#[test]
fn default_run_matches_every_expected_verdict() {
    let report = run_all(&AuditConfig::default());
    let ids: Vec<&str> = report.claims.iter().map(|c| c.id).collect();
    assert_eq!(ids, ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"]);
    for c in &report.claims {
        assert!(c.matches_expected(), "{}: {:?} {:?}", c.id, c.computed, c.evidence);
        assert!(!c.evidence.is_empty(), "{}", c.id);
    }
    assert!(report.all_match());
    let refuted: Vec<&str> = report
        .claims
        .iter()
        .filter(|c| c.computed == Verdict::RefutedCandidate)
        .map(|c| c.id)
        .collect();
    assert_eq!(refuted, ["C3", "C5"]);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let cfg = AuditConfig::default();
    let a = run_all(&cfg).to_json();
    let b = run_all(&cfg).to_json();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], 1);
    for key in ["version", "constants", "claims", "config"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let first = &v["claims"][0];
    for key in ["id", "description", "anchor", "expected", "computed", "evidence", "notes"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn forcing_one_claim_to_error_leaves_the_rest_unchanged() {
    let baseline = run_all(&AuditConfig::default());
    for claim in REGISTRY {
        let cfg = AuditConfig {
            force_error: vec![claim.id.to_string()],
            ..AuditConfig::default()
        };
        let report = run_all(&cfg);
        assert!(!report.all_match());
        for (got, base) in report.claims.iter().zip(&baseline.claims) {
            if got.id == claim.id {
                assert_eq!(got.computed, Verdict::Error);
            } else {
                assert_eq!(got, base, "{} changed when {} errored", got.id, claim.id);
            }
        }
    }
}

#[test]
fn loose_symbolic_tolerance_flips_the_time_dependent_refutation() {
    // sampled residuals are at least 0.49 in magnitude, so only a tolerance
    // above that lets the candidate pass
    let cfg = AuditConfig::from_toml_str("[tolerances]\ntol_sym = 10.0\n").unwrap();
    let c3 = run_claim("C3", &cfg).unwrap();
    assert_eq!(c3.computed, Verdict::Contradicted);
    assert!(!run_all(&cfg).all_match());

    let cfg = AuditConfig::from_toml_str("[tolerances]\ntol_sym = 0.1\n").unwrap();
    assert_eq!(run_claim("C3", &cfg).unwrap().computed, Verdict::RefutedCandidate);
}

#[test]
fn raised_stability_bound_flips_the_stability_claim() {
    // W_1 * 2^2 = 54.4 eV
    let cfg = AuditConfig::from_toml_str("[constants]\nstability_bound = 60.0\n").unwrap();
    let c9 = run_claim("C9", &cfg).unwrap();
    assert_eq!(c9.computed, Verdict::Contradicted);
    assert_eq!(c9.evidence["levels_within_bound"], serde_json::json!([1, 2]));
}

#[test]
fn moving_a_sample_onto_a_node_weakens_the_refutation() {
    // theta = pi/2 is a node of Y(1,0); the residual vanishes there
    let cfg = AuditConfig::from_toml_str(&format!("[samples]\ntheta = [{}]\n", std::f64::consts::FRAC_PI_2)).unwrap();
    let c3 = run_claim("C3", &cfg).unwrap();
    assert_eq!(c3.computed, Verdict::Contradicted);
}

#[test]
fn text_report_has_one_row_per_claim() {
    let text = run_all(&AuditConfig::default()).to_text();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with('C')).collect();
    assert_eq!(rows.len(), 9);
    assert!(text.contains("9/9 verdicts match"));
}
