//! End-to-end runs of the `polarlab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn polarlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarlab")).args(args).output().expect("spawn polarlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polarlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn simulate_writes_one_row_per_point() {
    let out = polarlab(&[
        "simulate", "--channel", "dl", "--a", "40", "--e", "100", "--list", "4", "--ebn0", "1.0:0.5:2.0", "--seed", "7",
        "--min-errors", "5", "--max-frames", "300",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ebn0_db,frames,frame_errors,fer,ber,ci_low,ci_high"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1,"));
}

#[test]
fn simulate_is_reproducible_and_fixed_mode_runs() {
    let args = ["simulate", "--channel", "ul", "--a", "60", "--e", "160", "--ebn0", "2", "--seed", "3", "--max-frames", "256", "--mode", "fixed"];
    let a = polarlab(&args);
    let b = polarlab(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn missing_required_setting_is_a_usage_error() {
    let out = polarlab(&["simulate", "--channel", "dl", "--a", "40", "--ebn0", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`e`"));
    assert!(!polarlab(&["simulate", "--bogus"]).status.success());
    assert!(!polarlab(&[]).status.success());
}

#[test]
fn config_file_overrides_flags() {
    let cfg = scratch("sim.cfg");
    std::fs::write(&cfg, "# downlink probe\nchannel = dl\na = 40\ne = 100\nebn0 = 30\nmax_frames = 256\n").unwrap();
    let out = polarlab(&["simulate", "--config", cfg.to_str().unwrap(), "--a", "500", "--ebn0", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).lines().nth(1).unwrap().starts_with("30,256,0,"));

    std::fs::write(&cfg, "channel = dl\nwidth = 3\n").unwrap();
    assert!(!polarlab(&["simulate", "--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn decode_recovers_all_zero_frame() {
    let cfg = scratch("dec.cfg");
    std::fs::write(&cfg, "channel = dl\na = 40\ne = 100\nlist = 8\n").unwrap();
    let llr = scratch("llr.txt");
    std::fs::write(&llr, "4.0\n".repeat(100)).unwrap();
    for mode in ["float", "fixed"] {
        let out = polarlab(&["decode", "--config", cfg.to_str().unwrap(), "--llr-in", llr.to_str().unwrap(), "--mode", mode]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out).trim(), "message=0000000000 crc=pass pm=0");
    }
    std::fs::write(&llr, "4.0\n".repeat(99)).unwrap();
    assert!(!polarlab(&["decode", "--config", cfg.to_str().unwrap(), "--llr-in", llr.to_str().unwrap()]).status.success());
}

#[test]
fn latency_sweep_csv() {
    let path = scratch("latency.csv");
    let out = polarlab(&["latency", "--channel", "dl", "--e", "432", "--list", "8", "--smax", "4", "--flags", "all", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("A,E,CC_total,CC_scu,CC_npu,CC_psu"));
    assert_eq!(text.lines().count(), 1 + 129);
    assert!(!polarlab(&["latency", "--channel", "dl", "--e", "432", "--flags", "turbo"]).status.success());
}

#[test]
fn analyze_nodes_csv() {
    let out = polarlab(&["analyze-nodes", "--channel", "dl", "--sample-stride", "400"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("key_family,key,count,percent"));
    assert!(text.lines().any(|l| l.starts_with("seq_count,1,")));
    assert!(text.lines().any(|l| l.starts_with("np,1,")));
}

#[test]
fn sort_bench_reports_counts() {
    let out = polarlab(&["sort-bench", "--x", "64", "--y", "8", "--trials", "2000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("pass 2000/2000"));
    assert!(text.contains("partial=1000 full=2016"));
    assert!(!polarlab(&["sort-bench", "--x", "8", "--y", "6"]).status.success());
}
