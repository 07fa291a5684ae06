//! End-to-end tests of the `dtcalc` binary: exit codes, output determinism,
//! JSON round-tripping, and the DTCALC_CORPUS override.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dtcalc::instance::InstanceFile;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dtcalc"));
    c.env_remove("DTCALC_CORPUS");
    c
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dtcalc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn dt_matches_known_values() {
    let q1 = corpus("q1.json");
    let out = run(&["dt", q1.to_str().unwrap(), "--k", "1", "--measure", "quiver"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1/3"), "got: {}", stdout(&out));

    let q2 = corpus("q2.json");
    let out = run(&["dt", q2.to_str().unwrap(), "--k", "1", "--measure", "quiver"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1/6"), "got: {}", stdout(&out));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let file = corpus("a1gm.json");
    for args in [
        vec!["inspect", file.to_str().unwrap()],
        vec!["--json", "inspect", file.to_str().unwrap()],
        vec!["--json", "epsilon", file.to_str().unwrap(), "--k", "1", "--measure", "a(1/2)"],
        vec!["--json", "check", file.to_str().unwrap()],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "args {:?} failed", args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {:?}", args);
    }
}

#[test]
fn json_report_round_trips_the_instance() {
    for name in ["q1.json", "a2gm_pm1.json", "p1gm.json"] {
        let file = corpus(name);
        let text = std::fs::read_to_string(&file).unwrap();
        let direct = InstanceFile::parse_text(&text).unwrap();

        let out = run(&["--json", "inspect", file.to_str().unwrap()]);
        assert!(out.status.success());
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let echoed: InstanceFile =
            serde_json::from_value(report["instance"].clone()).unwrap();
        assert_eq!(echoed, direct, "echoed instance differs for {name}");
    }
}

#[test]
fn check_single_file_exits_zero() {
    let out = run(&["check", corpus("p1gm.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn failing_check_exits_one() {
    // a measure that does not sum to 1 over any partition fails the
    // partition and sum-rule checks
    let text = r#"{
        "kind": "linear_torus",
        "torus_rank": 1,
        "weights": [["1"]],
        "measures": {
            "bad": {
                "type": "explicit",
                "cones": [
                    {"generators": [], "value": "1"},
                    {"generators": [["1"]], "value": "1"},
                    {"generators": [["1"], ["-1"]], "value": "1"}
                ]
            }
        }
    }"#;
    let dir = std::env::temp_dir().join("dtcalc-test-badmeasure");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, text).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join("dtcalc-test-malformed");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["inspect", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    // missing file is also a usage error
    let out = run(&["inspect", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown measure name
    let out = run(&[
        "dt",
        corpus("q1.json").to_str().unwrap(),
        "--k",
        "1",
        "--measure",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_env_override() {
    // a directory with one instance: check --all runs exactly that one
    let dir = std::env::temp_dir().join("dtcalc-test-corpus");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(corpus("bgm.json"), dir.join("bgm.json")).unwrap();
    let out = bin()
        .env("DTCALC_CORPUS", &dir)
        .args(["--json", "check", "--all"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().expect("array of reports");
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["file"], "bgm.json");

    // an empty directory is a warning plus success, not an error
    let empty = std::env::temp_dir().join("dtcalc-test-corpus-empty");
    std::fs::create_dir_all(&empty).unwrap();
    let out = bin()
        .env("DTCALC_CORPUS", &empty)
        .args(["check", "--all"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn bundled_check_all_passes() {
    let out = run(&["check", "--all"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"), "unexpected failure:\n{text}");
    for name in ["q1.json", "q2.json", "p1gm.json", "a1gm.json", "a2gm_pm1.json", "bgm.json"] {
        assert!(text.contains(name), "missing {name} in check --all output");
    }
}
