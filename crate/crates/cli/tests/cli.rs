use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfshuffle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn hall_listing() {
    let out = run(&["hall", "--alphabet", "2", "--order", "lyndon", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("(1,(1,2))"));
}

#[test]
fn factorize_long_word() {
    let out = run(&["factorize", "233212222111", "--alphabet", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let words: Vec<String> = stdout(&out)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(words, ["233^1", "2^1", "12222^1", "1^3"]);
}

#[test]
fn verify_area_jacobi() {
    let out = run(&[
        "verify",
        "--identity",
        "area-jacobi",
        "--letters",
        "1",
        "2",
        "3",
        "--alphabet",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "residual: 0");
}

#[test]
fn constants_are_rejected_where_positivity_is_required() {
    let out = run(&["verify", "--identity", "zinbiel-positive", "--elements", "1", "e", "e"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "--json",
        "verify",
        "--identity",
        "integration-by-parts",
        "--elements",
        "12",
        "1 + e",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["residual"], serde_json::json!([]));
}

#[test]
fn failed_check_exits_with_one() {
    let coarse = run(&["sig", "--segments", "3", "--integrate", "1", "2", "--partition", "2"]);
    assert_eq!(coarse.status.code(), Some(1));
    let fine = run(&["sig", "--segments", "3", "--integrate", "1", "2", "--partition", "3000"]);
    assert_eq!(fine.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        run(&["verify", "--identity", "nope", "--letters", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["factorize", "12x"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["factorize", "123", "--alphabet", "2"]).status.code(), Some(2));
}

#[test]
fn json_output_uses_exact_fractions() {
    let out = run(&["--json", "dual", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!([{"word": "12", "coeff": "1/1"}]));
    let out = run(&["--json", "expand", "12 - 21"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|t| t["coeff"].as_str().unwrap().contains('/')));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--identity", "chain-rule", "--random", "20", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["sig", "--segments", "4", "--level", "3", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn signature_from_csv() {
    let dir = std::env::temp_dir().join(format!("halfshuffle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("axis.csv");
    std::fs::File::create(&file)
        .unwrap()
        .write_all(b"x,y\n0,0\n1,0\n1,1\n")
        .unwrap();
    let path = file.to_str().unwrap();
    let out = run(&["sig", "--path", path, "--element", "12 - 21"]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-12);
    let out = run(&[
        "--json",
        "sig",
        "--path",
        path,
        "--integrate",
        "1",
        "2",
        "--partition",
        "1000",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].as_f64().unwrap() <= 1e-3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn checks_pass() {
    for args in [
        vec!["hall", "--check", "--alphabet", "2", "--max-degree", "8"],
        vec!["dual", "--check", "4", "--alphabet", "2"],
        vec!["rewrite-areas", "--check", "4"],
        vec!["eliminate", "--check", "4"],
        vec!["rank-report", "--max-degree", "4", "--expect-full-rank"],
        vec!["expand", "--round-trips", "10", "--max-degree", "4"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn worked_example_report() {
    let out = run(&["--json", "worked-example", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coefficient"], "1/288");
    assert_eq!(v["printed_coefficient"], "1/48");
    assert!(v["relative_error"].as_f64().unwrap() <= 1e-6);
}
