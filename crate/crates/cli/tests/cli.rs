use std::process::{Command, Output};

use serde_json::Value;

fn moonshine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moonshine")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).expect("json report").as_array().expect("array").clone()
}

fn without_runtime(mut rows: Vec<Value>) -> Vec<Value> {
    for r in &mut rows {
        r.as_object_mut().unwrap().remove("runtime_ms");
    }
    rows
}

#[test]
fn list_names_every_check_with_an_anchor() {
    let out = moonshine(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("j-function"));
    assert!(text.contains("borcherds-identity"));
    assert_eq!(text.lines().count(), 18);
    assert!(text.lines().all(|l| l.split_whitespace().count() > 1));
}

#[test]
fn golay_passes_quickly() {
    let out = moonshine(&["verify", "golay"]);
    assert!(out.status.success());
    let rows = report(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["status"], "pass");
    assert!(rows[0]["runtime_ms"].as_u64().unwrap() < 1000);
    assert!(!rows[0]["anchor"].as_str().unwrap().is_empty());
}

#[test]
fn leech_theta_counts_norm_four() {
    let out = moonshine(&["verify", "leech-theta", "--nmax", "2"]);
    assert!(out.status.success());
    let rows = report(&out);
    assert_eq!(rows[0]["actual"]["norm4"], "196560");
    assert_eq!(rows[0]["actual"], rows[0]["expected"]);
}

#[test]
fn unknown_check_exits_with_error() {
    let out = moonshine(&["verify", "nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check: nonexistent"));
}

#[test]
fn malformed_config_is_rejected() {
    let dir = std::env::temp_dir().join(format!("moonshine-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "prec = many\n").unwrap();
    let out = moonshine(&["verify", "golay", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad configuration"));
    let out = moonshine(&["verify", "golay", "--prec", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_flags_and_out_path() {
    let dir = std::env::temp_dir().join(format!("moonshine-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "# short run\nprec = 6\nkmax = 3\n").unwrap();
    let path = dir.join("report.json");
    let out = moonshine(&[
        "verify",
        "replicability",
        "j-function",
        "--config",
        conf.to_str().unwrap(),
        "--kmax",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // catalogue order, not command-line order
    assert_eq!(rows[0]["name"], "j-function");
    assert_eq!(rows[1]["name"], "replicability");
    assert_eq!(rows[1]["expected"]["j_family_passes"], 4);
    assert_eq!(rows[1]["status"], "pass");
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "golay", "characters", "triality", "cocycle", "octahedral", "arithmetic", "--trials", "200"];
    let a = without_runtime(report(&moonshine(&args)));
    let b = without_runtime(report(&moonshine(&args)));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn series_and_enumerate_subcommands() {
    let out = moonshine(&["series", "j", "--prec", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 196884/1"), "{text}");
    assert!(text.contains("2 21493760/1"));
    assert!(!moonshine(&["series", "nope"]).status.success());

    let out = moonshine(&["enumerate", "niemeier", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 48);
    let out = moonshine(&["enumerate", "leech", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
