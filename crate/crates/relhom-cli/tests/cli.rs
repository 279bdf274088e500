//! End-to-end tests of the command-line surface: output determinism, the
//! exit-status contract, and spec-file round-trip stability.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn relhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhom")).args(args).output().expect("binary runs")
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let path = fixture("kA2.json");
    let args = ["check", path.to_str().unwrap(), "--suite", "bijection", "--format", "json"];
    let a = relhom(&args);
    let b = relhom(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "repeated runs must emit identical bytes");
    // and the gamma table too
    let args =
        ["gamma", path.to_str().unwrap(), "--module", "S2", "--tau", "tau1", "--format", "json"];
    let a = relhom(&args);
    let b = relhom(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_zero_when_all_checks_pass() {
    let path = fixture("kA2.json");
    let out = relhom(&["check", path.to_str().unwrap(), "--suite", "localization"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_one_on_failing_verdicts() {
    let path = fixture("kA2.json");
    let out = relhom(&[
        "check",
        path.to_str().unwrap(),
        "--suite",
        "approximation",
        "--convention",
        "printed",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"));
}

#[test]
fn exit_two_on_parse_and_validation_errors() {
    let broken = fixture("kA2_broken.json");
    let out = relhom(&["simples", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("VALIDATION_ERROR"));
    assert!(err.contains("Associativity"), "diagnostic names the violated triple: {err}");

    let out = relhom(&["simples", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));

    // empty file is a parse error
    let dir = std::env::temp_dir().join("relhom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = relhom(&["simples", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PARSE_ERROR"));
}

#[test]
fn spec_round_trip_is_stable_for_all_fixtures() {
    for name in ["kA2.json", "ss2.json", "loc2.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = relhom_cli::specdoc::parse_spec(&text).unwrap();
        let emitted = relhom_cli::specdoc::emit_spec(&doc);
        let doc2 = relhom_cli::specdoc::parse_spec(&emitted).unwrap();
        assert_eq!(doc, doc2, "{name} round trip changed the document");
        assert_eq!(emitted, relhom_cli::specdoc::emit_spec(&doc2));
    }
}

#[test]
fn shipped_fixture_files_match_the_programmatic_fixtures() {
    let text = std::fs::read_to_string(fixture("kA2.json")).unwrap();
    let doc = relhom_cli::specdoc::parse_spec(&text).unwrap();
    let resolved = relhom_cli::specdoc::resolve(&doc).unwrap();
    let fx = relhom_core::fixtures::KA2Fixture::new();
    assert_eq!(resolved.algebra, fx.algebra);
    assert_eq!(resolved.modules["S1"], fx.s1);
    assert_eq!(resolved.modules["S2"], fx.s2);
    assert_eq!(resolved.modules["I2"], fx.i2);
    assert_eq!(resolved.modules["P1"], fx.p1);
    // the cogenerated theory in the file resolves to the explicit one
    assert_eq!(resolved.theories["tau_cog_I2"], resolved.theories["tau1"]);

    let text = std::fs::read_to_string(fixture("ss2.json")).unwrap();
    let resolved =
        relhom_cli::specdoc::resolve(&relhom_cli::specdoc::parse_spec(&text).unwrap()).unwrap();
    assert_eq!(resolved.algebra, relhom_core::fixtures::ss2());

    let text = std::fs::read_to_string(fixture("loc2.json")).unwrap();
    let resolved =
        relhom_cli::specdoc::resolve(&relhom_cli::specdoc::parse_spec(&text).unwrap()).unwrap();
    assert_eq!(resolved.algebra, relhom_core::fixtures::loc2());
}

#[test]
fn gamma_table_matches_expected_values() {
    let path = fixture("kA2.json");
    let out = relhom(&[
        "gamma",
        path.to_str().unwrap(),
        "--module",
        "S2",
        "--tau",
        "tau1",
        "--max-degree",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("degree0  — derived torsion functor of S2 in degree 0  [witness: 0]"));
    assert!(text.contains("degree 1  [witness: dim 1, factors {S1:1}]"));
    assert!(text.contains("degree 2  [witness: 0]"));
    assert!(text.contains("degree 3  [witness: 0]"));
}

#[test]
fn timing_flag_controls_timestamps() {
    // identical twice without timing, and the flag only adds wall_ms fields
    let path = fixture("ss2.json");
    let args = ["tors", path.to_str().unwrap(), "--format", "json"];
    let a = relhom(&args);
    let b = relhom(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("wall_ms"));
}

#[test]
fn resolve_reports_certified_range_when_capped() {
    let path = fixture("loc2.json");
    let out = relhom(&[
        "resolve",
        path.to_str().unwrap(),
        "--module",
        "k",
        "--tau",
        "tau0",
        "--depth",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("certified degrees"), "capped resolution must carry its range: {text}");
}
