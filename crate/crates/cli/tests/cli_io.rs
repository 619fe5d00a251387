//! Exit codes, file formats, and byte-level determinism of the binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyatlas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["enumerate"]).status.code(), Some(2)); // missing args
    assert_eq!(
        run(&["enumerate", "--group", "nope", "--q", "5", "--rank", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["enumerate", "--group", "pgl", "--q", "6", "--rank", "3"])
            .status
            .code(),
        Some(2),
        "q=6 is not a prime power"
    );
    assert_eq!(
        run(&["enumerate", "--group", "psigmal", "--q", "5", "--rank", "3"])
            .status
            .code(),
        Some(2),
        "psigmal needs even field exponent"
    );
    assert_eq!(
        run(&["enumerate", "--group", "pgl", "--q", "5", "--rank", "6"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cap_exceeded_exits_3() {
    assert_eq!(
        run(&["census", "--group", "pgl", "--q", "25"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "enumerate",
            "--group",
            "pgl",
            "--q",
            "13",
            "--rank",
            "3",
            "--closure-cap",
            "100",
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn census_mismatch_would_exit_1_and_match_exits_0() {
    let out = run(&["census", "--group", "psl", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("D6"));
    assert!(stdout.contains("yes"));
}

#[test]
fn enumerate_csv_schema() {
    let out = run(&["enumerate", "--group", "pgl", "--q", "5", "--rank", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next(),
        Some("group,q,rank,schlafli,self_dual,degenerate,orbit_size,generators")
    );
    let row = lines.next().expect("one record");
    assert!(row.starts_with("pgl,5,4,\"{3,3,3}\",true,false,"));
    // generators serialize as point-image lists
    assert!(row.contains("];["));
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("1 up to isomorphism, 1 up to isomorphism and duality"));
}

#[test]
fn reports_are_byte_identical_across_workers_and_partitions() {
    let dir = std::env::temp_dir().join("polyatlas-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let make = |name: &str, workers: &str, seed: &str| -> (Vec<u8>, Vec<u8>) {
        let path = dir.join(name);
        let out = run(&[
            "enumerate",
            "--group",
            "psigmal",
            "--q",
            "9",
            "--rank",
            "4",
            "--dedup",
            "iso",
            "--workers",
            workers,
            "--seed-partition",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let side = dir.join(format!("{name}.meta.json"));
        (std::fs::read(&path).unwrap(), std::fs::read(&side).unwrap())
    };
    let (csv1, meta1) = make("a.csv", "1", "0");
    let (csv2, meta2) = make("b.csv", "4", "123456789");
    assert_eq!(csv1, csv2);
    assert_eq!(meta1, meta2);
    assert!(!csv1.is_empty());
}

#[test]
fn json_format_carries_config_and_rows() {
    let out = run(&[
        "enumerate",
        "--group",
        "psl",
        "--q",
        "5",
        "--rank",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["group"], "psl");
    assert_eq!(doc["config"]["counts"]["iso"], 3);
    assert_eq!(doc["config"]["counts"]["iso_dual"], 2);
    assert!(doc["rows"].as_array().unwrap().len() == 2); // iso-dual default
}

#[test]
fn dedup_mode_controls_row_count() {
    let iso = run(&[
        "enumerate",
        "--group",
        "psl",
        "--q",
        "5",
        "--rank",
        "3",
        "--dedup",
        "iso",
    ]);
    let dual = run(&[
        "enumerate",
        "--group",
        "psl",
        "--q",
        "5",
        "--rank",
        "3",
        "--dedup",
        "iso-dual",
    ]);
    let iso_rows = String::from_utf8(iso.stdout).unwrap().lines().count() - 1;
    let dual_rows = String::from_utf8(dual.stdout).unwrap().lines().count() - 1;
    assert_eq!(iso_rows, 3);
    assert_eq!(dual_rows, 2);
}

#[test]
fn field_info_reports_canonical_modulus() {
    let out = run(&["field-info", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("9,3,2,1 0 1"));
    let bad = run(&["field-info", "--q", "12"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sidecar_excludes_scheduling_fields() {
    let dir = std::env::temp_dir().join("polyatlas-sidecar");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.csv");
    let out = run(&[
        "enumerate",
        "--group",
        "pgl",
        "--q",
        "5",
        "--rank",
        "3",
        "--workers",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let side: serde_json::Value =
        serde_json::from_slice(&std::fs::read(Path::new(&dir).join("r.csv.meta.json")).unwrap())
            .unwrap();
    assert!(side.get("workers").is_none());
    assert!(side.get("seed_partition").is_none());
    assert_eq!(side["command"], "enumerate");
    assert_eq!(side["version"], env!("CARGO_PKG_VERSION"));
}
