use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-dt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_g2_passes_and_reports_p() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("g2.json");
    let o = run(&["--json", json.to_str().unwrap(), "verify", "G2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = read_json(&json);
    assert_eq!(v["pass"], true);
    assert_eq!(v["spec"], "G2");
    assert!(v["checks"].as_array().unwrap().len() > 20);

    let o = run(&["char-poly", "G2"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    let coeffs: Vec<f64> = first
        .trim_start_matches("P = (")
        .trim_end_matches(')')
        .split(',')
        .map(|c| c.trim().parse().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 3);
    for (c, want) in coeffs.iter().zip([1.0, 0.0, 1.0]) {
        assert!((c - want).abs() < 1e-10, "{first}");
    }
}

#[test]
fn fixed_point_b4_matches_table() {
    let o = run(&["fixed-point", "B4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("a ")).unwrap();
    let values: Vec<f64> = line
        .split_once('(')
        .unwrap()
        .1
        .trim_end_matches(')')
        .split(',')
        .map(|c| c.trim().parse().unwrap())
        .collect();
    for (v, want) in values.iter().zip([2.0, 3.0, 4.0, 5f64.sqrt()]) {
        assert!((v - want).abs() < 1e-10, "{line}");
    }
}

#[test]
fn same_seed_gives_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|i| dir.path().join(format!("r{i}.json")))
        .collect();
    for p in &paths {
        let o = run(&[
            "--seed",
            "42",
            "--json",
            p.to_str().unwrap(),
            "periodicity",
            "D5",
            "--trials",
            "20",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(read_json(&paths[0])["rng_seed"], 42);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "Z9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "A13"]).status.code(), Some(2));
    assert_eq!(run(&["--tol=-1", "verify", "G2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["frieze", "A2", "--start=1,-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = run(&["frieze", "A2", "--rows", "3", "--start", "1,2,3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn csv_has_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let o = run(&["--csv", csv.to_str().unwrap(), "height-identity", "E8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("type,check,residual,tolerance,pass"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    assert_eq!(row[0], "E8");
    assert_eq!(row[4], "true");
}

#[test]
fn twist_subcommands_pass() {
    for mode in ["orbit", "spectrum", "tnn", "period"] {
        let o = run(&["twist-an", "4", mode]);
        assert_eq!(o.status.code(), Some(0), "{mode}: {}", stdout(&o));
    }
}

#[test]
fn coxeter_and_exponents_pass() {
    for args in [["coxeter", "E7"], ["exponents", "F4"]] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}
