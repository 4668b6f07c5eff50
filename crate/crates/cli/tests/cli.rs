use std::path::PathBuf;
use std::process::{Command, Output};

fn orliczlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orliczlab"))
        .args(args)
        .env_remove("ORLICZLAB_THREADS")
        .output()
        .expect("spawn orliczlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orliczlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

// Two triangles of height 1e-4: valid, but conditioned badly enough that
// floating bicomplex identities drift past their absolute tolerance.
const SLIVER: &str = r#"{"vertices":[0,1,2,3],"simplices":{"0":[[0],[1],[2],[3]],"1":[[0,1],[0,2],[1,2],[1,3],[2,3]],"2":[[0,1,2],[1,2,3]]},"coordinates":[[0,0],[1,0],[0.5,1e-4],[1.5,1e-4]],"metric":"euclidean"}"#;

#[test]
fn orlicz_norm_golden() {
    let o = orliczlab(&["orlicz", "norm", "--phi", "power:p=2", "--values", "3,-4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["norm"].as_f64().unwrap() - 5.0).abs() < 1e-10);
    assert!((v["modular_at_norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn weighted_norm_matches_lp() {
    let o = orliczlab(&["orlicz", "norm", "--phi", "power:p=3", "--values", "1,2", "--weights", "0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let expected = (0.5f64 + 2.0 * 8.0).powf(1.0 / 3.0);
    assert!((v["norm"].as_f64().unwrap() - expected).abs() < 1e-10 * expected);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nope"][..],
        &["verify", "orlicz", "--phi", "powr:p=2"],
        &["orlicz", "norm", "--phi", "power:p=2", "--values", "1", "--weights", "-1"],
        &["verify", "simplicial", "--mesh", "/nonexistent/mesh.json"],
        &["mesh", "circle:n=abc"],
        &["table", "--phi", "power:p=2", "--values", "1,x"],
    ] {
        let o = orliczlab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failing_checks_exit_one() {
    let path = scratch("sliver.json");
    std::fs::write(&path, SLIVER).unwrap();
    let o = orliczlab(&["verify", "bicomplex", "--mesh", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn verify_is_deterministic() {
    let a = orliczlab(&["verify", "simplicial", "--mesh", "torus:m=3", "--seed", "7"]);
    let b = orliczlab(&["verify", "simplicial", "--mesh", "torus:m=3", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report.get("timing_ms").is_none());
}

#[test]
fn timing_flag_adds_field() {
    let o = orliczlab(&["verify", "orlicz", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["timing_ms"].is_number());
}

#[test]
fn csv_report_and_out_file() {
    let path = scratch("orlicz.csv");
    let o = orliczlab(&["verify", "orlicz", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,value,tolerance,pass"));
    let rows: Vec<_> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn table_rows_and_empty_phi_list() {
    let o = orliczlab(&["table", "--phi", "power:p=2", "--phi", "exp", "--values", "3,-4;1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5, "{text}");
    assert!(text.lines().nth(1).unwrap().contains(",5"));

    let o = orliczlab(&["table", "--values", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() <= 1);
}

#[test]
fn mesh_round_trips_through_file() {
    let path = scratch("circle.json");
    let o = orliczlab(&["mesh", "circle:n=6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = orliczlab(&["verify", "simplicial", "--mesh", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
