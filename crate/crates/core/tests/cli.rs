//! End-to-end runs of the `nnverify` binary.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data_path;

fn nnverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnverify")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(rel: &str) -> String {
    data_path(rel).display().to_string()
}

fn run_prop(cmd: &str, prop: &str, extra: &[&str]) -> Output {
    let (net, prop) = (path("two_neuron.nnl"), path(prop));
    let mut args = vec![cmd, "--network", &net, "--property", &prop];
    args.extend_from_slice(extra);
    nnverify(&args)
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("nnverify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_reports_secure_and_insecure() {
    let o = run_prop("verify", "le20.prop", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Secure");

    let o = run_prop("verify", "le15.prop", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("Insecure cex=("), "{}", stdout(&o));
}

#[test]
fn worker_count_does_not_change_the_status() {
    for w in ["1", "2", "8"] {
        for mode in ["naive", "symbolic"] {
            let o = run_prop("verify", "le15.prop", &["--workers", w, "--mode", mode]);
            assert_eq!(o.status.code(), Some(1));
            let o = run_prop("verify", "le20.prop", &["--workers", w, "--mode", mode]);
            assert_eq!(o.status.code(), Some(0));
        }
    }
}

#[test]
fn depth_bound_gives_unknown() {
    let o = run_prop(
        "verify",
        "le15.prop",
        &["--max-depth", "0", "--mode", "naive", "--no-monotonicity"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "Unknown");
}

#[test]
fn eval_info_and_bench() {
    let net = path("two_neuron.nnl");
    let o = nnverify(&["eval", "--network", &net, "--input", "4,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "6");

    let o = nnverify(&["info", "--network", &net]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("inputs:     2") && s.contains("parameters: 9"), "{s}");

    let o = nnverify(&["bench", "--network", &net, "--box", "4:6,1:5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("2.200000e1") && s.contains("1.000000e1"), "{s}");
}

#[test]
fn enumerate_writes_a_json_report() {
    let out = scratch("enum.json");
    let o = run_prop(
        "enumerate",
        "le15.prop",
        &["--precision", "0.25", "--report", &out.display().to_string()],
    );
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "enumerate");
    assert_eq!(v["status"], "Insecure");
    let leaves = v["partition"].as_array().unwrap();
    assert_eq!(leaves.len(), 11);
    assert!(leaves.iter().all(|l| l["box"].is_array() || l["box"].is_object()));
}

#[test]
fn verify_report_carries_the_counterexample() {
    let out = scratch("verify.json");
    let o = run_prop("verify", "le15.prop", &["--report", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["counterexample"].as_array().unwrap().len(), 2);
    assert!(v["stats"]["nodes_explored"].as_u64().unwrap() >= 1);
}

#[test]
fn error_exit_codes() {
    // bad flags and bad configuration
    assert_eq!(run_prop("verify", "le15.prop", &["--bogus"]).status.code(), Some(3));
    assert_eq!(run_prop("verify", "le15.prop", &["--precision", "-1"]).status.code(), Some(3));
    assert_eq!(run_prop("verify", "le15.prop", &["--workers", "0"]).status.code(), Some(3));

    // unreadable or malformed input
    let bad = scratch("bad.prop");
    std::fs::write(&bad, "outputs: 1\nregion:\n0 1\nconstraint:\nfrobnicate 0\n").unwrap();
    let net = path("two_neuron.nnl");
    let o = nnverify(&["verify", "--network", &net, "--property", &bad.display().to_string()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
    assert!(!Path::new("/nonexistent.nnl").exists());
    let o = nnverify(&["info", "--network", "/nonexistent.nnl"]);
    assert_eq!(o.status.code(), Some(4));

    // property shaped for a different network
    let wide = scratch("wide.prop");
    std::fs::write(&wide, "outputs: 1\nregion:\n0 1\n0 1\n0 1\nconstraint:\nle 0 1\n").unwrap();
    let o = nnverify(&["verify", "--network", &net, "--property", &wide.display().to_string()]);
    assert_eq!(o.status.code(), Some(5));
    let o = nnverify(&["eval", "--network", &net, "--input", "1,2,3"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(nnverify(&["--help"]).status.code(), Some(0));
    assert_eq!(nnverify(&["--version"]).status.code(), Some(0));
    assert_eq!(nnverify(&["verify", "--help"]).status.code(), Some(0));
}
