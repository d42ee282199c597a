use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qcnoise::output::{read_events_csv, read_series_csv};
use qcnoise::parse_config;
use qcnoise::scan::EventKind;

fn qcnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcnoise"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(dir: &Path, text: &str) -> Output {
    let config = dir.join("run.ini");
    fs::write(&config, text).unwrap();
    let out = dir.join("out");
    qcnoise(&["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn assert_success(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn evolve_writes_series_that_reads_back_within_bounds() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_config(tmp.path(), "subcommand = evolve\nmodel = ccm\n[system]\nlambda = 0.8\n");
    assert_success(&out);
    let csv = fs::read_to_string(tmp.path().join("out/series_ccm.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,decoherence,purity,concurrence"));
    assert_eq!(lines.next(), Some("0.0,0.0,1.0,1.0"));
    let rows = read_series_csv(&csv).unwrap();
    assert_eq!(rows.len(), 401);
    for row in &rows {
        assert!(row.triple.within_bounds(1e-12), "{row:?}");
    }
    assert!(rows.iter().any(|r| r.triple.concurrence < 1e-3));
    assert!(tmp.path().join("out/series_ccm.svg").exists());
}

#[test]
fn effective_config_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "subcommand = evolve\nmodel = dcm\n[grid]\nsteps = 11\n[noise]\ndelta_m = 2\n";
    assert_success(&run_config(tmp.path(), text));
    let dumped = fs::read_to_string(tmp.path().join("out/effective.ini")).unwrap();
    let mut expected = parse_config(text).unwrap();
    expected.output_dir = tmp.path().join("out");
    assert_eq!(parse_config(&dumped).unwrap(), expected);
}

#[test]
fn detect_finds_death_and_birth() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "\
subcommand = detect
model = ccm
[system]
lambda = 0.5
r = 1
[noise]
delta_m = 3
delta_o = 1
[grid]
t_end = 8
emit_svg = false
";
    // emit_svg belongs to [output]; a misplaced key must be rejected
    let bad = run_config(tmp.path(), text);
    assert_eq!(bad.status.code(), Some(1));
    let text = text.replace("emit_svg = false\n", "[output]\nemit_svg = false\n");
    assert_success(&run_config(tmp.path(), &text));
    let events = read_events_csv(&fs::read_to_string(tmp.path().join("out/events.csv")).unwrap()).unwrap();
    assert!(events.len() >= 2);
    assert_eq!(events[0].kind, EventKind::Death);
    assert!(events.iter().any(|e| e.kind == EventKind::Birth));
    for e in &events {
        assert!(e.bracket.0 < e.t_event && e.t_event < e.bracket.1);
        assert!(e.bracket.1 - e.bracket.0 <= 1e-6);
    }
    assert!(!tmp.path().join("out/series_ccm.svg").exists());
}

#[test]
fn compare_reports_h11_agreement() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "subcommand = compare\nmodel = ccm\n[system]\nlambda = 0.5\n[noise]\ndelta_m = 1\ndelta_o = 1\n[compare]\ntimes = 2\n";
    assert_success(&run_config(tmp.path(), text));
    let csv = fs::read_to_string(tmp.path().join("out/reconciliation.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let diff_col = header.iter().position(|&h| h == "abs_diff").unwrap();
    let row = csv.lines().find(|l| l.starts_with("h11_ccm,")).expect("h11 row");
    let diff: f64 = row.split(',').nth(diff_col).unwrap().parse().unwrap();
    assert!(diff <= 1e-6, "{row}");
    assert!(csv.lines().any(|l| l.starts_with("p11_dcm,") && l.ends_with("sign-flipped")));
}

#[test]
fn trace_writes_element_series() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "subcommand = trace\nmodel = ccm\n[grid]\nt_end = 5\nsteps = 501\n[trace]\nsource = noiseless\nelement = 1,4\n";
    assert_success(&run_config(tmp.path(), text));
    let csv = fs::read_to_string(tmp.path().join("out/trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,re,im"));
    assert_eq!(lines.next(), Some("0.0,0.5,0.0"));
    assert_eq!(csv.lines().count(), 502);
    assert!(tmp.path().join("out/trace.svg").exists());
}

#[test]
fn sweep_writes_one_series_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "subcommand = sweep\nmodel = ccm\n[grid]\nsteps = 21\n[sweep]\naxis = delta_m\nvalues = 1, 2, 3\n";
    assert_success(&run_config(tmp.path(), text));
    for i in 0..3 {
        assert!(tmp.path().join(format!("out/sweep_delta_m_{i}.csv")).exists());
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_config(tmp.path(), "subcommand = evolve\n[system]\nr = 1.5\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`r`"));

    let out = run_config(tmp.path(), "subcommand = evolve\n[sytem]\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = tmp.path().join("nope.ini");
    assert_eq!(qcnoise(&["run", missing.to_str().unwrap()]).status.code(), Some(3));

    // output directory below a regular file cannot be created
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let config = tmp.path().join("ok.ini");
    fs::write(&config, "subcommand = evolve\n[grid]\nsteps = 3\n").unwrap();
    let out = qcnoise(&["run", config.to_str().unwrap(), "--out", blocker.join("x").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    assert_eq!(qcnoise(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qcnoise(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_prints_effective_config() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("c.ini");
    fs::write(&config, "subcommand = evolve\nmodel = ccm\n").unwrap();
    let out = qcnoise(&["check", config.to_str().unwrap()]);
    assert_success(&out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nodes = 129"));
    assert_eq!(parse_config(&text).unwrap(), parse_config("subcommand = evolve\n").unwrap());
}
