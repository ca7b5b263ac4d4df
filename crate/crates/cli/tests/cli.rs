use std::process::{Command, Output};

use serde_json::Value;

fn swrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swrec"))
        .args(args)
        .env_remove("SWREC_BELL_CACHE_DIR")
        .output()
        .expect("run swrec")
}

fn stdout(args: &[&str]) -> String {
    let out = swrec(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn enumerate_lists_words() {
    assert_eq!(
        stdout(&["enumerate", "--n", "3"]),
        "111\n112\n121\n122\n123\n"
    );
    assert_eq!(
        stdout(&["enumerate", "--n", "3", "--k", "2", "--stat", "swrec"]),
        "112\t7\n121\t5\n122\t5\n"
    );
    assert_eq!(stdout(&["enumerate", "--n", "0"]), "ε\n");
    assert_eq!(stdout(&["enumerate", "--n", "2", "--k", "3"]), "");
}

#[test]
fn enumerate_other_statistics() {
    let srec = stdout(&["enumerate", "--n", "3", "--stat", "srec"]);
    assert_eq!(srec, "111\t1\n112\t4\n121\t3\n122\t3\n123\t6\n");
    let rec = stdout(&["enumerate", "--n", "3", "--stat", "rec"]);
    assert_eq!(rec, "111\t1\n112\t2\n121\t2\n122\t2\n123\t3\n");
}

#[test]
fn enumerate_respects_cap() {
    assert_eq!(swrec(&["enumerate", "--n", "13"]).status.code(), Some(2));
    assert_eq!(
        swrec(&["enumerate", "--n", "3", "--cap", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn totals_agree_across_methods() {
    assert_eq!(stdout(&["total", "--n", "2", "--method", "brute"]), "6\n");
    assert_eq!(
        stdout(&["total", "--n", "10", "--method", "formula"]),
        "8962070\n"
    );
    for n in 0..=12 {
        let n = n.to_string();
        let f = stdout(&["total", "--n", &n]);
        assert_eq!(f, stdout(&["total", "--n", &n, "--method", "brute"]));
        assert_eq!(f, stdout(&["total", "--n", &n, "--method", "egf"]));
    }
}

#[test]
fn large_totals_are_plain_decimal() {
    let t = stdout(&["total", "--n", "300"]);
    assert!(t.trim().chars().all(|c| c.is_ascii_digit()));
    assert!(t.len() > 400);
    assert_eq!(swrec(&["total", "--n", "501"]).status.code(), Some(2));
}

#[test]
fn gf_rows() {
    assert_eq!(
        stdout(&["gf", "--k", "2", "--max-n", "3", "--format", "csv"]),
        "n,s,count\n2,5,1\n3,5,2\n3,7,1\n"
    );
    let one = stdout(&["gf", "--k", "1", "--max-n", "4", "--format", "csv"]);
    assert_eq!(one, "n,s,count\n1,1,1\n2,1,1\n3,1,1\n4,1,1\n");
    assert_eq!(
        swrec(&["gf", "--k", "0", "--max-n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn gf_csv_and_json_encode_the_same_rows() {
    let csv = stdout(&["gf", "--k", "3", "--max-n", "9", "--format", "csv"]);
    let csv_rows: Vec<Vec<u64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    let json: Value = serde_json::from_str(&stdout(&["gf", "--k", "3", "--max-n", "9"])).unwrap();
    assert_eq!(json["k"], 3);
    let json_rows: Vec<Vec<u64>> = json["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(csv_rows, json_rows);
}

#[test]
fn verify_reports_cases() {
    let out: Value =
        serde_json::from_str(&stdout(&["verify", "--suite", "thm3", "--max-n", "12"])).unwrap();
    assert_eq!(out["suite"], "thm3");
    assert_eq!(out["cases_run"], 13);
    assert_eq!(out["failures"].as_array().unwrap().len(), 0);
    assert!(out["elapsed_ms"].is_u64());

    let out: Value =
        serde_json::from_str(&stdout(&["verify", "--suite", "eq1", "--max-n", "9"])).unwrap();
    assert_eq!(out["cases_run"], 45);

    let out: Value = serde_json::from_str(&stdout(&["verify", "--suite", "asym"])).unwrap();
    let diag = &out["diagnostics"];
    assert_eq!(diag["ratios"].as_array().unwrap().len(), 6);
    assert_eq!(diag["convergence_asserted"], false);
    assert!(diag["leading_constant_flag"].is_string());
}

#[test]
fn verify_usage_errors() {
    assert_eq!(swrec(&["verify", "--suite", "eq9"]).status.code(), Some(2));
    assert_eq!(
        swrec(&["verify", "--suite", "thm3", "--max-n", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(swrec(&["verify", "--max-k", "abc"]).status.code(), Some(2));
}

#[test]
fn asymptotic_reports() {
    assert_eq!(stdout(&["asymptotic", "--ns", ""]).trim(), "[]");
    let v: Value = serde_json::from_str(&stdout(&["asymptotic", "--ns", "10", "--json"])).unwrap();
    let rep = &v[0];
    assert_eq!(rep["exact_total"], "8962070");
    assert!((rep["ratio"].as_f64().unwrap() - 0.386).abs() < 1e-3);

    let v: Value = serde_json::from_str(&stdout(&["asymptotic", "--ns", "10,100"])).unwrap();
    let rs: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["r"].as_f64().unwrap())
        .collect();
    assert_eq!(rs.len(), 2);
    assert!(rs[0] < rs[1]);

    let table = stdout(&["asymptotic", "--ns", "10", "--format", "table"]);
    assert!(table.starts_with("n\tr\texact_total"));
    assert_eq!(swrec(&["asymptotic", "--ns", "0"]).status.code(), Some(2));
    assert_eq!(
        swrec(&["asymptotic", "--ns", "5000"]).status.code(),
        Some(2)
    );
}

#[test]
fn bell_cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_swrec"))
            .args(["total", "--n", "20"])
            .env("SWREC_BELL_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let cache = std::fs::read_to_string(dir.path().join("bell.txt")).unwrap();
    assert!(cache.lines().any(|l| l == "23 44152005855084346"));
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}
