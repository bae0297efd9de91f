use std::path::PathBuf;
use std::process::{Command, Output};

fn monadcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monadcert")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("monadcert-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_genus_11_passes_and_writes_json() {
    let path = tmp("g11.json");
    let out = monadcert(&["verify", "--genus", "11", "--seed", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["version", "config", "certificates", "timings"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    let cert = &json["certificates"][0];
    for key in ["name", "claim", "status", "dims", "samples", "attempts"] {
        assert!(cert.get(key).is_some(), "certificate missing {key}");
    }
    assert_eq!(json["config"]["max_retries"], 64);
    std::fs::remove_file(path).ok();
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tmp("a.json");
    let b = tmp("b.json");
    for p in [&a, &b] {
        let out = monadcert(&["verify", "--genus", "7", "--trials", "3", "--seed", "9", "--json", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn configuration_errors_exit_with_2() {
    assert_eq!(monadcert(&["verify", "--genus", "4"]).status.code(), Some(2));
    assert_eq!(monadcert(&["verify", "--genus", "11", "--prime", "1000"]).status.code(), Some(2));
    assert_eq!(monadcert(&["verify", "--genus", "11", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(monadcert(&["table", "--genus", "11", "--window", "3..1"]).status.code(), Some(2));
}

#[test]
fn table_prints_a_row_per_twist() {
    let out = monadcert(&["table", "--genus", "13", "--window", "-1..2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F = E(-2)"));
    let rows = text.lines().filter(|l| l.trim_start().starts_with("-1 ")).count();
    assert_eq!(rows, 4);
}

#[test]
fn survey_and_sweep_pass() {
    assert_eq!(monadcert(&["survey", "--genus", "10", "--trials", "3"]).status.code(), Some(0));
    let out = monadcert(&["appendix-b", "--configs", "12"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("admissible 12"));
}
