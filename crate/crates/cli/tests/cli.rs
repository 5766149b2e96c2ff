use std::path::Path;
use std::process::{Command, Output};

fn semiflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiflex")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn sl2_file(dir: &Path, h_on_f: i64) -> String {
    let text = format!(
        r#"{{"grading":{{"rank":1,"degree_functional":[1]}},
        "basis":[{{"label":"e","weight":[1],"index":0}},{{"label":"h","weight":[0],"index":0}},{{"label":"f","weight":[-1],"index":0}}],
        "brackets":[{{"i":1,"j":0,"terms":[{{"k":0,"num":2}}]}},{{"i":1,"j":2,"terms":[{{"k":2,"num":{h_on_f}}}]}},
                    {{"i":0,"j":2,"terms":[{{"k":1,"num":1}}]}}],
        "beta":[{{"label":"h","num":2}}]}}"#
    );
    let path = dir.join(format!("sl2_{h_on_f}.json"));
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verma_character_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let o = semiflex(&["character", "--lambda", "h=0,K=1,d=0", "--depth", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("w1,w2,degree,dimension\n"));
    assert!(csv.lines().any(|l| l == "-1,-1,-3,3"), "{csv}");
    assert!(csv.lines().any(|l| l == "0,0,0,1"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = semiflex(&["semiinf-cohomology", "--module", "wakimoto", "--sub", "a", "--depth", "3", "--format", "jsonl", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("one.jsonl"), run("two.jsonl"));
}

#[test]
fn wakimoto_cohomology_over_a() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    let o = semiflex(&["semiinf-cohomology", "--module", "wakimoto", "--sub", "a", "--depth", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: no --lambda"));
    let csv = std::fs::read_to_string(&out).unwrap();
    let nonzero: Vec<&str> = csv.lines().skip(1).filter(|l| !l.ends_with(",0")).collect();
    assert_eq!(nonzero, vec!["0,0,0,1"]);
}

#[test]
fn verification_commands_pass() {
    for args in [
        vec!["verify-shapiro", "--algebra", "a", "--sub", "loop-nminus", "--depth", "3"],
        vec!["verify-us", "--algebra", "a", "--depth", "3"],
        vec!["verify-univ", "--algebra", "a", "--module", "verma", "--depth", "3"],
        vec!["wakimoto", "--lambda", "h=1/2,K=-3,d=1", "--depth", "3"],
        vec!["lie-cohomology", "--side", "below", "--module", "verma", "--depth", "3"],
    ] {
        let o = semiflex(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn shapiro_report_is_json() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = semiflex(&["verify-shapiro", "--algebra", "a", "--depth", "2", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn algebra_check_names_the_failing_triple() {
    let dir = tempfile::tempdir().unwrap();
    let good = semiflex(&["algebra-check", "--algebra", &sl2_file(dir.path(), -2)]);
    assert_eq!(code(&good), 0);
    let bad = semiflex(&["algebra-check", "--algebra", &sl2_file(dir.path(), -3)]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("Jacobi fails for (e, h, f)"));
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["wakimoto", "--lambda", "h=1,K", "--depth", "2"],
        vec!["wakimoto", "--lambda", "h=x", "--depth", "2"],
        vec!["character", "--depth", "5", "--window", "3"],
        vec!["character", "--depth", "0"],
        vec!["character", "--algebra", "nonsense"],
        vec!["semiinf-cohomology", "--sub", "nowhere", "--depth", "2"],
        vec!["verify-us", "--algebra", "affine_sl2", "--depth", "2"],
    ] {
        assert_eq!(code(&semiflex(&args)), 2, "{args:?}");
    }
    assert_eq!(code(&semiflex(&["no-such-command"])), 2);
}
