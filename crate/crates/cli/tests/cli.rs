//! End-to-end tests of the command-line binary: output formats, exit
//! codes, and byte-level determinism of emitted documents.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcgeo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcgeo-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_sphere_file(with_subset: Option<&str>) -> PathBuf {
    let subset = match with_subset {
        Some(name) => format!(", \"subset\": {{\"type\": \"named\", \"name\": \"{name}\"}}"),
        None => String::new(),
    };
    let text = format!(
        "{{\"constructor\": {{\"type\": \"suspension\", \"base\": \
         {{\"type\": \"circle\", \"perimeter\": 6.283185307179586}}}}, \"k\": 1{subset}}}\n"
    );
    let path = scratch(&format!("sphere-{:?}.json", with_subset.map(|s| s.len()).unwrap_or(0)));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn angle_prints_twelve_significant_digits() {
    let out = run(&["angle", "--k", "0", "--s1", "3", "--s2", "4", "--opp", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1.57079632679\n");

    // Octant triangle on the unit sphere: all sides a quarter turn.
    let q = "1.5707963267948966";
    let out = run(&["angle", "--k", "1", "--s1", q, "--s2", q, "--opp", q]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1.57079632679\n");
}

#[test]
fn angle_rejects_impossible_sides_with_exit_two() {
    let out = run(&["angle", "--k", "1", "--s1", "2", "--s2", "2", "--opp", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("invalid side"), "stderr: {}", stderr_of(&out));
}

#[test]
fn dist_prints_the_pole_separation() {
    let space = write_sphere_file(None);
    let out = run(&[
        "dist",
        "--space",
        space.to_str().unwrap(),
        "--p",
        r#"{"kind":"susp","lat":0.0,"base":{"kind":"circle","arc":0.0}}"#,
        "--q",
        r#"{"kind":"susp","lat":3.141592653589793,"base":{"kind":"circle","arc":1.0}}"#,
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "3.14159265359\n");
}

#[test]
fn check_passes_the_equator_and_flags_the_isolated_pair() {
    let space = write_sphere_file(None);
    let report_path = scratch("equator-qc.json");
    let out = run(&[
        "check",
        "qc",
        "--space",
        space.to_str().unwrap(),
        "--subset",
        "equator",
        "--resolution",
        "0.2",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["check"], "quasi_convex");
    assert_eq!(report["verdict"], "no_violation");
    assert!(report["worst_margin"].as_f64().unwrap() < 0.0);
    assert_eq!(report["params"]["resolution"].as_f64().unwrap(), 0.2);
    assert!(report["version"].is_string());

    let report_path = scratch("isolated-qc.json");
    let out = run(&[
        "check",
        "qc",
        "--space",
        space.to_str().unwrap(),
        "--subset",
        "isolated",
        "--resolution",
        "0.2",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    // Violation found: exit 1, report still written.
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["verdict"], "violation");
    let witness = &report["witness"];
    for key in ["q", "p", "r", "dqp", "dpr", "dqr", "angle"] {
        assert!(!witness[key].is_null(), "witness lacks {key}");
    }
}

#[test]
fn bundled_subset_is_the_fallback() {
    let space = write_sphere_file(Some("equator"));
    let out = run(&[
        "check",
        "convex",
        "--space",
        space.to_str().unwrap(),
        "--resolution",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["check"], "locally_convex");
    assert_eq!(report["subset"], "equator");
}

#[test]
fn missing_subset_is_a_usage_error() {
    let space = write_sphere_file(None);
    let out = run(&["check", "qc", "--space", space.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("subset"));
}

#[test]
fn smtable_emits_the_fixed_columns_with_shrinking_gaps() {
    let out = run(&["smtable", "--m", "4,8,16,32"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,S_m,L2,gap"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], 4.0);
    assert_eq!(rows[3][0], 32.0);
    for pair in rows.windows(2) {
        assert!(pair[1][3] < pair[0][3], "gaps must shrink");
        assert_eq!(pair[0][2], pair[1][2], "reference column is constant");
    }
}

#[test]
fn verify_pair_distance_sum_is_exact_on_poles() {
    let space = write_sphere_file(None);
    let out = run(&[
        "verify",
        "lemma43",
        "--space",
        space.to_str().unwrap(),
        "--subset",
        "poles",
        "--resolution",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["check"], "antipodal_distance_sum");
    assert_eq!(report["worst_margin"].as_f64().unwrap(), 0.0);
}

#[test]
fn qgeo_minimizes_and_certifies_a_rim_chain() {
    let path = scratch("disc.json");
    std::fs::write(&path, "{\"type\": \"flat_disc\", \"radius\": 1.0}\n").unwrap();
    let chain_path = scratch("chain.json");
    let out = run(&[
        "qgeo",
        "--space",
        path.to_str().unwrap(),
        "--subset",
        "rim",
        "--resolution",
        "0.02",
        "--from",
        r#"{"kind":"cap","r":1.0,"arc":0.0}"#,
        "--to",
        r#"{"kind":"cap","r":1.0,"arc":1.5707963267948966}"#,
        "--m",
        "8",
        "--certify",
        "--out",
        chain_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&chain_path).unwrap()).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 9);
    assert_eq!(doc["stationarity_margin"].as_f64().unwrap(), 0.0);
    let energy = doc["energy"].as_f64().unwrap();
    assert!(energy > 2.45 && energy < 2.52, "energy {energy}");
    let certs = doc["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    for cert in certs {
        assert_eq!(cert["verdict"], "no_violation");
    }
}

#[test]
fn unknown_zoo_scenario_exits_two() {
    let out = run(&["zoo", "run", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown scenario"));
}

#[test]
fn zoo_list_names_every_scenario() {
    let out = run(&["zoo", "list"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.lines().count() >= 12);
    assert!(text.contains("helix-in-cylinder"));
    assert!(text.contains("capped-cylinder-rim"));
}

fn read_dir_sorted(dir: &Path) -> Vec<PathBuf> {
    let mut entries: Vec<PathBuf> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    entries
}

#[test]
fn zoo_run_all_is_byte_identical_across_parallelism() {
    let dir1 = scratch("zoo-serial");
    let dir2 = scratch("zoo-parallel");
    for (dir, threads) in [(&dir1, "1"), (&dir2, "4")] {
        let out = run(&[
            "zoo",
            "run",
            "all",
            "--parallel",
            threads,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    }
    let files1 = read_dir_sorted(&dir1);
    let files2 = read_dir_sorted(&dir2);
    assert_eq!(files1.len(), files2.len());
    assert!(files1.len() >= 13, "expected reports plus a summary");
    for (a, b) in files1.iter().zip(&files2) {
        assert_eq!(a.file_name(), b.file_name());
        let bytes_a = std::fs::read(a).unwrap();
        let bytes_b = std::fs::read(b).unwrap();
        assert_eq!(bytes_a, bytes_b, "{:?} differs between runs", a.file_name());
    }
    let summary = std::fs::read_to_string(dir1.join("summary.csv")).unwrap();
    assert!(summary.starts_with("scenario,flag,expected,observed,margin\n"));
}
