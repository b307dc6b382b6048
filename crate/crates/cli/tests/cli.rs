use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_brownloop"));
    c.env_remove("BROWNLOOP_OUT");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().env("BROWNLOOP_OUT", dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn help_exits_zero() {
    let o = bin().arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mcloop"));
}

#[test]
fn structure_of_a2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["structure", "--model", "a2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("ℓ=2") && s.contains("n=5") && s.contains("ν=8"), "{s}");
}

#[test]
fn negative_time_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["kernel", "--model", "h3", "--t", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("t must be positive"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["kernel", "--nope"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["mass", "--at", "1"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn structural_datum_rejects_kernel_commands() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["kernel", "relativized", "region", "bridge"] {
        assert_eq!(run_in(dir.path(), &[cmd, "--model", "a2"]).status.code(), Some(1), "{cmd}");
    }
}

#[test]
fn env_sets_output_and_flag_overrides_it() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = run_in(env_dir.path(), &["kernel", "--points", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_rows(&env_dir.path().join("report.csv")).len(), 3);
    let summary = std::fs::read_to_string(env_dir.path().join("summary.jsonl")).unwrap();
    let v: serde_json::Value = serde_json::from_str(summary.lines().next().unwrap()).unwrap();
    assert_eq!(v["subcommand"], "kernel");
    assert_eq!(v["config"]["points"], 3);
    let out = flag_dir.path().to_str().unwrap();
    let o = run_in(env_dir.path(), &["kernel", "--points", "3", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.path().join("report.csv").exists());
    // summary.jsonl appends
    let summary = std::fs::read_to_string(env_dir.path().join("summary.jsonl")).unwrap();
    assert_eq!(summary.lines().count(), 1);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# kernel settings\npoints = 4\nt = 2,3\nplot = true\nseed = 9\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = run_in(dir.path(), &["--config", c, "kernel"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_rows(&dir.path().join("report.csv")).len(), 8);
    assert!(dir.path().join("report.gp").exists());
    let o = run_in(dir.path(), &["kernel", "--config", c, "--points", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_rows(&dir.path().join("report.csv")).len(), 4);
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(run_in(dir.path(), &["--config", c, "kernel"]).status.code(), Some(2));
}

#[test]
fn csv_is_full_precision_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["relativized", "--model", "h3", "--t", "0.5,2", "--points", "7"];
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    let first = std::fs::read(dir.path().join("report.csv")).unwrap();
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(dir.path().join("report.csv")).unwrap());
    for row in csv_rows(&dir.path().join("report.csv")) {
        for field in row {
            let x: f64 = field.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), field);
            let mantissa = field.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }
}

#[test]
fn mcloop_writes_sample_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mcloop", "--paths", "2000", "--dt", "1e-2", "--workers", "3", "--seed", "5"];
    let o = run_in(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sample = std::fs::read(dir.path().join("sample.csv")).unwrap();
    assert_eq!(csv_rows(&dir.path().join("sample.csv")).len(), 2000);
    assert_eq!(run_in(dir.path(), &args).status.code(), Some(0));
    assert_eq!(sample, std::fs::read(dir.path().join("sample.csv")).unwrap());
    let last = stdout(&o).lines().last().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert!(v["results"]["ks"].as_f64().unwrap() < 0.1);
    assert_eq!(run_in(dir.path(), &["mcloop", "--paths", "10"]).status.code(), Some(1));
}

#[test]
fn mass_prints_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["mass", "--data", "radial", "--at", "0,0,0", "--at", "2,1,0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("M(")).map(String::from).collect();
    assert_eq!(lines.len(), 2);
    // unit-mass radial data have M̃ ≡ 1
    for l in lines {
        let v: f64 = l.rsplit("= ").next().unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{l}");
    }
}

#[test]
fn checks_bridge_ratiogap_region_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["checks", "--t", "1,10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("FAIL"), "{}", stdout(&o));
    let o = run_in(dir.path(), &["bridge"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(v["results"]["decreasing"], true);
    let o = run_in(dir.path(), &["ratiogap"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    let slope = v["results"]["slope"].as_f64().unwrap();
    assert!((-0.65..=-0.35).contains(&slope));
    let o = run_in(dir.path(), &["region", "--t", "100,10000", "--plot"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("report.gp").exists());
    assert_eq!(csv_rows(&dir.path().join("report.csv")).len(), 2);
}
