use std::fs;
use std::process::{Command, Output};

fn qembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qembed")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn basis_listing() {
    let o = qembed(&["basis", "--modes", "6", "--total", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    assert_eq!(text.lines().next().unwrap(), "0 2 0 0 0 0 0");
    let one = qembed(&["basis", "--modes", "1", "--total", "5"]);
    assert_eq!(stdout(&one), "0 5\n");
    assert_eq!(qembed(&["basis", "--modes", "0", "--total", "1"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(qembed(&["verify", "--chain", "glq6", "--q", "1.3", "--total", "3"]).status.code(), Some(0));
    assert_eq!(qembed(&["verify", "--chain", "vibrational", "--q", "1", "--total", "2"]).status.code(), Some(0));
    let bad = qembed(&["verify", "--chain", "vibrational", "--tau", "0.9", "--total", "4"]);
    assert!(matches!(bad.status.code(), Some(1) | Some(2)));
    // an unreachable tolerance fails the report but still prints it
    let strict = qembed(&["verify", "--chain", "gamma", "--q", "1.3", "--total", "2", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("FAIL"));
}

#[test]
fn q_flags_are_exclusive_and_required() {
    assert_eq!(qembed(&["verify", "--chain", "gamma", "--total", "1"]).status.code(), Some(2));
    assert_eq!(qembed(&["verify", "--chain", "gamma", "--q", "1.3", "--tau", "0.1", "--total", "1"]).status.code(), Some(2));
    assert_eq!(qembed(&["verify", "--chain", "gamma", "--q", "-1", "--total", "1"]).status.code(), Some(2));
}

#[test]
fn verify_json_mirrors_report() {
    let o = qembed(&["verify", "--chain", "rotational", "--q", "0.7", "--total", "2", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["dim"], 21);
    let entries = v["report"]["entries"].as_array().unwrap();
    let text = stdout(&qembed(&["verify", "--chain", "rotational", "--q", "0.7", "--total", "2"]));
    // one text line per entry plus header and summary
    assert_eq!(text.lines().count(), entries.len() + 2);
}

#[test]
fn rotator_csv() {
    let o = qembed(&["rotator", "--tau", "0.1", "--K", "1", "--jmax", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,energy"));
    let e2: f64 = text.lines().nth(3).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((e2 - 0.2f64.sin() * 0.3f64.sin() / 0.1f64.sin().powi(2)).abs() < 1e-12);
    assert!((e2 - 5.89069).abs() < 1e-5);
}

#[test]
fn fit_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.json");
    fs::write(&path, r#"[{"j": 2, "energy": 6.0}, {"j": 4, "energy": 20.0}, {"j": 6, "energy": 42.0}]"#).unwrap();
    let o = qembed(&["fit", "--levels", path.to_str().unwrap(), "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["tau"].as_f64().unwrap() < 1e-6);
    assert!((v["K"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let missing = qembed(&["fit", "--levels", dir.path().join("none.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(3));
    fs::write(&path, r#"{"levels": [{"j": 2, "energy": 6.0}]}"#).unwrap();
    assert_eq!(qembed(&["fit", "--levels", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn limit_is_monotone() {
    let o = qembed(&["limit", "--chain", "rotational", "--eps", "1e-2,1e-3,1e-4", "--total", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("generator,eps,distance"));
    let agg: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("max,"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(agg.len(), 3);
    assert!(agg[0] > agg[1] && agg[1] > agg[2]);
}

#[test]
fn spectrum_symmetrized_phase() {
    let o = qembed(&["spectrum", "--chain", "vibrational", "--tau", "0.1", "--total", "1", "--term", "so3=1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.ends_with(",5")));
    let neg = qembed(&["spectrum", "--chain", "vibrational", "--tau", "-0.1", "--total", "1", "--term", "so3=1"]);
    assert_eq!(stdout(&neg), text);
    let unknown = qembed(&["spectrum", "--chain", "vibrational", "--q", "1.3", "--total", "1", "--term", "u6=1"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_file_output_works() {
    let args = ["limit", "--chain", "gamma", "--eps", "1e-2,1e-3", "--total", "1", "--output", "json"];
    assert_eq!(qembed(&args).stdout, qembed(&args).stdout);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = qembed(&["rotator", "--q", "1.1", "--K", "2", "--jmax", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 5);
    let unwritable = dir.path().join("no/such/dir/r.csv");
    let o = qembed(&["rotator", "--q", "1.1", "--K", "2", "--jmax", "3", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
