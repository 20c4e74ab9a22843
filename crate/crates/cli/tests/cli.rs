use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn locq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locq")).args(args).env_remove("LOCQ_SEED").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = locq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    ok(&full);
    path
}

#[test]
fn build_reports_census() {
    let text = ok(&["build", "--kind", "gen-rep", "--delta", "3", "--length", "5"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["qubits"], 7);
    assert_eq!(v["z_checks"], 6);
}

#[test]
fn build_usage_errors_exit_two() {
    assert_eq!(locq(&["build", "--kind", "gen-rep", "--delta", "3"]).status.code(), Some(2));
    let out = locq(&["build", "--kind", "gen-rep", "--delta", "3", "--length", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn build_files_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = code(dir.path(), "a.json", &["--kind", "subdivided", "--outer", "toric:3,3", "--length", "3"]);
    let b = code(dir.path(), "b.json", &["--kind", "subdivided", "--outer", "toric:3,3", "--length", "3"]);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn zero_error_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), "c.json", &["--kind", "subdivided", "--outer", "toric:3,3", "--length", "3"]);
    let e = dir.path().join("e.json");
    fs::write(&e, r#"{"format_version":1,"error":[]}"#).unwrap();
    let text = ok(&["decode", "--code", &c, "--error", e.to_str().unwrap(), "--decoder", "subdivided"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["failure"], false);
    assert_eq!(v["residual_syndrome_empty"], true);
}

#[test]
fn sampled_decode_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), "c.json", &["--kind", "subdivided", "--outer", "toric:3,3", "--length", "5"]);
    let run = |extra: &[&str]| {
        let mut args = vec!["decode", "--code", &c, "--sample", "0.01,0,7", "--decoder", "subdivided"];
        args.extend_from_slice(extra);
        ok(&args)
    };
    let first = run(&[]);
    assert_eq!(first, run(&[]));
    assert_eq!(first, run(&["--parallel-patches"]));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), "c.json", &["--kind", "planar", "--length", "5"]);
    let args = ["decode", "--code", &c, "--sample", "0.2", "--decoder", "uf"];
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_locq")).args(args).env("LOCQ_SEED", seed).output().unwrap().stdout
    };
    assert_eq!(with_env("11"), ok(&["decode", "--code", &c, "--sample", "0.2,0,11", "--decoder", "uf"]).into_bytes());
}

#[test]
fn decoder_code_mismatch_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), "p.json", &["--kind", "gen-surface", "--delta", "3", "--length", "3"]);
    let out = locq(&["decode", "--code", &c, "--sample", "0.1", "--decoder", "rep-mwpm"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tampered_code_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), "r.json", &["--kind", "gen-rep", "--delta", "3", "--length", "5"]);
    let text = fs::read_to_string(&c).unwrap().replacen("\"open\"", "\"interior\"", 1);
    fs::write(&c, text).unwrap();
    let out = locq(&["decode", "--code", &c, "--sample", "0.1", "--decoder", "rep-mwpm"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_single_point() {
    let text = ok(&["sweep", "--L", "3", "--p", "0", "--trials", "1", "--seed", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "code_id,decoder,L,p,p_erase,trials,failures,rate,ci_lo,ci_hi,seed");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[fields.len() - 5], "0");
}

#[test]
fn sweep_seeds_differ_but_overlap() {
    let run = |seed: &str| ok(&["sweep", "--L", "3", "--p", "0.04", "--trials", "2000", "--seed", seed]);
    let parse = |text: String| {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let row = r.records().next().unwrap().unwrap();
        (row[6].parse::<u64>().unwrap(), row[8].parse::<f64>().unwrap(), row[9].parse::<f64>().unwrap())
    };
    let (fa, la, ha) = parse(run("1"));
    let (fb, lb, hb) = parse(run("2"));
    assert_ne!(fa, fb);
    assert!(la <= hb && lb <= ha);
}

#[test]
fn sweep_bounds_follow_the_grid() {
    let text = ok(&["sweep", "--L", "3,5", "--p", "0.01:0.02:0.01", "--trials", "5", "--seed", "1", "--bounds"]);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    let grid = |prefix: &str| -> Vec<(String, String)> {
        rows.iter().filter(|x| x[1].starts_with(prefix)).map(|x| (x[2].to_string(), x[3].to_string())).collect()
    };
    let sim = grid("subdivided");
    assert_eq!(sim.len(), 4);
    for name in ["bound:hoeffding", "bound:mwpm_path"] {
        let mut b = grid(name);
        b.sort();
        let mut s = sim.clone();
        s.sort();
        assert_eq!(b, s, "{name}");
    }
}

#[test]
fn sweep_malformed_range_exits_two() {
    assert_eq!(locq(&["sweep", "--L", "3", "--p", "0.1:x", "--trials", "1"]).status.code(), Some(2));
    assert_eq!(locq(&["sweep", "--L", "three", "--p", "0.1", "--trials", "1"]).status.code(), Some(2));
}

#[test]
fn bench_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let text =
        ok(&["bench", "--family", "gen-uf", "--sizes", "5,9,17", "--trials", "3", "--out", out.to_str().unwrap()]);
    let summary: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!(summary["ops_slope"].as_f64().unwrap() > 0.5);
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("family,size,n,wall_ns,ops"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn bench_edge_cases() {
    assert_ne!(locq(&["bench", "--family", "uf", "--sizes", ""]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let text = ok(&["bench", "--family", "uf", "--sizes", "5", "--trials", "2", "--out", out.to_str().unwrap()]);
    let summary: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!(summary["ops_slope"].is_null());
    assert!(summary["note"].is_string());
}
