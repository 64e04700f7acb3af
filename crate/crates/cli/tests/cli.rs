use std::io::Write;
use std::process::{Command, Output};

fn audit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_audit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_all_json_matches_expectations() {
    let o = audit(&["run-all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 9);
    for c in claims {
        assert_eq!(c["computed"], c["expected"], "{}", c["id"]);
    }
}

#[test]
fn perturbed_tolerance_exits_nonzero() {
    let dir = std::env::temp_dir().join(format!("audit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("loose.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "[tolerances]\ntol_sym = 10.0").unwrap();
    let o = audit(&["claim", "C3", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["claims"][0]["computed"], "contradicted");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    assert_eq!(audit(&["claim", "C42"]).status.code(), Some(2));
    assert_eq!(audit(&["run-all", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    let o = audit(&["parse-expr", "2 *"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains('^'));
}

#[test]
fn parse_expr_prints_canonical_form() {
    let o = audit(&["parse-expr", "y*x/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x*y/2");
    let o = audit(&["parse-expr", "--json", "delta(r - r_n)/r"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["contains_delta"], true);
    assert_eq!(v["free_symbols"], serde_json::json!(["r", "r_n"]));
}

#[test]
fn hydrino_table_and_radial_commands() {
    let o = audit(&["hydrino-table", "--k-max", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["q"], "1/2");

    let o = audit(&["radial", "--nu", "0.5", "--l", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["admissible"], false);

    let o = audit(&["radial-scan", "--nu-min", "0.5", "--nu-max", "2.5", "--steps", "40"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let zeros: Vec<f64> = v["zeros"].as_array().unwrap().iter().map(|z| z.as_f64().unwrap()).collect();
    assert_eq!(zeros.len(), 2);
    assert!((zeros[0] - 1.0).abs() < 1e-6 && (zeros[1] - 2.0).abs() < 1e-6);
}
