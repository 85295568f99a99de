//! End-to-end runs of the `tilecorr` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilecorr")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf8")
}

/// Data rows of a CSV table (comment lines and header dropped).
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn constants_at_origin_are_one() {
    let out = stdout(&["constants", "--kl", "0,0"]);
    assert_eq!(rows(&out), vec![vec!["0", "0", "1/1", "1.0", "1.0", "1.0"]]);
}

#[test]
fn reference_boundary_correlation_is_one() {
    let out = stdout(&["omega-b", "--down", "1:0"]);
    assert_eq!(rows(&out)[0][1], "1/1");
}

#[test]
fn bump_ratio_sequence_targets_one_half() {
    let out = stdout(&["ratio", "--family", "Wbump", "--k", "1", "--l", "0", "--N", "2..12"]);
    let r = rows(&out);
    assert_eq!(r.len(), 11);
    assert_eq!(r.last().unwrap()[0], "12");
    assert_eq!(r.last().unwrap()[3].parse::<f64>().unwrap(), 0.5);
}

#[test]
fn output_is_deterministic() {
    let args = ["ratio", "--family", "e", "--down", "2:0", "--N", "2..6"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn json_output_parses() {
    let out = stdout(&["omega-bar-b", "--down", "2:0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["exact"], "45/8");
}

#[test]
fn dumped_region_counts_the_same() {
    let dir = std::env::temp_dir().join(format!("tilecorr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("region.txt");
    let p = path.to_str().unwrap();
    let built = stdout(&["count", "--N", "1", "--down", "1:0", "--dump-region", p]);
    let loaded = stdout(&["count", "--region", p]);
    assert_eq!(rows(&built)[0][1], rows(&loaded)[0][1]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("tilecorr-out-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let printed = stdout(&["constants", "--kl", "2,0"]);
    assert!(stdout(&["constants", "--kl", "2,0", "--out", p]).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["ratio", "--family", "bogus", "--N", "2"]).status.code(), Some(2));
    assert_eq!(run(&["omega-b", "--down", "1x"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_1() {
    let out = run(&["omega-b", "--down", "1:0,1:0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn asym_thm22_reports_main_term() {
    let out = stdout(&["asym", "--check", "thm22", "--config", "D:1:1:0", "--R-ladder", "8,16"]);
    let r = rows(&out);
    assert_eq!(r.len(), 2);
    let target: f64 = r[0][3].parse().unwrap();
    assert!((target - 16.0 / (3.0 * 3f64.sqrt() * std::f64::consts::PI)).abs() < 1e-12);
}

#[test]
fn verify_subset_passes() {
    let out = stdout(&["verify", "--criterion", "9,10"]);
    assert!(out.contains("criterion  9 PASS"));
    assert!(out.contains("criterion 10 PASS"));
}
