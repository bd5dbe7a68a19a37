use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hopfcross::hopf::FiniteGroup;
use hopfcross::io::save_hopf;
use hopfcross_cli::run_command;

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn example(name: &str) -> String {
    data().join("examples").join(name).display().to_string()
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> i32 {
    run_command(std::iter::once("hopfcross").chain(args.iter().copied()))
}

#[test]
fn check_shipped_algebras() {
    for name in ["kz2.json", "kz2xz2.json", "s3.json", "h4.json"] {
        assert_eq!(run(&["check", &example(name)]), 0, "{name}");
    }
}

#[test]
fn prove_names_the_failing_line() {
    let ids = data().join("identities/twisted_mirror.sw");
    assert_eq!(run(&["prove", &example("h4.json"), ids.to_str().unwrap()]), 0);

    let text = fs::read_to_string(&ids).unwrap();
    let corrupted: String = text
        .lines()
        .map(|l| if l.starts_with("mbar_theta ;") { l.replace("(x) S(h4) a2", "(x) h4 a2") } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    assert_ne!(corrupted, text);
    let path = tmp("corrupted.sw");
    fs::write(&path, corrupted).unwrap();
    let report = tmp("prove.json");
    let code = run(&["prove", &example("h4.json"), path.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(report).unwrap()).unwrap();
    let failing: Vec<_> = report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["witness"]["line"], 28);
}

#[test]
fn unbound_cocycles_default_to_trivial() {
    let ids = data().join("identities/twisted_mirror.sw");
    let report = tmp("bindings.json");
    run(&["prove", &example("kz2.json"), ids.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(report).unwrap()).unwrap();
    assert_eq!(report["outcome"]["bindings"]["X"], "trivial");
}

#[test]
fn unwritable_report_is_an_input_error() {
    assert_eq!(run(&["check", &example("kz2.json"), "--report", "/nonexistent/dir/r.json"]), 2);
}

#[test]
fn host_mismatch_is_an_input_error() {
    assert_eq!(run(&["mirror-twisted", &example("h4.json"), &example("bichar.json")]), 2);
}

#[test]
fn dimension_guard() {
    let big = tmp("z9.json");
    save_hopf(&FiniteGroup::cyclic(9).algebra(), &big).unwrap();
    assert_eq!(run(&["mirror", big.to_str().unwrap()]), 2);
    assert_eq!(run(&["check", big.to_str().unwrap()]), 0);
}

#[test]
fn twist_writes_the_twisted_algebra() {
    let out = tmp("h4_twisted.json");
    assert_eq!(run(&["twist", &example("h4.json"), &example("r0.json"), "-o", out.to_str().unwrap()]), 0);
    assert_eq!(run(&["check", out.to_str().unwrap()]), 0);
}

#[test]
fn build_request_matches_the_direct_command() {
    let (a, b) = (tmp("build.json"), tmp("direct.json"));
    let req = example("request_twisted.json");
    assert_eq!(run(&["build", &req, "-o", a.to_str().unwrap()]), 0);
    assert_eq!(run(&["mirror-twisted", &example("kz2xz2.json"), &example("bichar.json"), "-o", b.to_str().unwrap()]), 0);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn prime_fields() {
    assert_eq!(run(&["check", &example("h4.json"), "--field", "fp:7"]), 0);
    assert_eq!(run(&["check", &example("h4.json"), "--field", "fp:8"]), 2);
    let status = Command::new(env!("CARGO_BIN_EXE_hopfcross"))
        .args(["check", &example("kz2.json"), "--field", "fp"])
        .env("HOPFCROSS_PRIME", "5")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let status = Command::new(env!("CARGO_BIN_EXE_hopfcross"))
        .args(["check", &example("kz2.json"), "--field", "fp"])
        .env_remove("HOPFCROSS_PRIME")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn coincide_records_the_outcome() {
    let report = tmp("coincide.json");
    assert_eq!(run(&["coincide", &example("h4.json"), &example("r0.json"), "--report", report.to_str().unwrap()]), 0);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(report).unwrap()).unwrap();
    assert!(report["outcome"]["coincides_via_antipode_map"].is_boolean());
    assert!(report["outcome"]["coincides_via_theta"].is_boolean());
}
