use std::path::Path;
use std::process::{Command, Output};

use concbound_cli::commands::replay_verdict;
use concbound_cli::record::{RunRecord, RunResult, Verdict};

fn concbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concbound"))
        .args(args)
        .env_remove("CONCBOUND_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no line {key:?} in\n{text}"));
    line[key.len()..].trim().parse().unwrap()
}

fn threshold(summary: &str) -> f64 {
    let rest = summary.split("p* = ").nth(1).expect("summary line");
    rest.split_whitespace().next().unwrap().parse().unwrap()
}

fn read_record(path: &Path) -> RunRecord {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn ghz_joint_bound_is_three_halves() {
    let o = concbound(&["bound", "--state", "family:ghz-noise,p=1", "--mode", "obs2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("bound on C^2: 1.50000000000"), "{text}");
    assert!(text.contains("verdict: ENTANGLED"));
}

#[test]
fn horodecki_is_ppt() {
    let o = concbound(&["bound", "--state", "family:horodecki,a=0.5,p=1", "--mode", "ppt"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(field(&text, "ppt min eigenvalue (worst split):") >= 0.0, "{text}");
    assert!(text.contains("verdict: UNDETECTED"));
}

#[test]
fn maximally_mixed_gives_zero() {
    let o = concbound(&["bound", "--state", "family:maximally-mixed,d=9", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "bound on C^2:"), 0.0);
    assert!(text.contains("verdict: UNDETECTED"));
}

#[test]
fn wootters_mode_on_a_bell_state() {
    let o = concbound(&["bound", "--state", "family:bell", "--mode", "wootters"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "bound on C:") - 1.0).abs() < 1e-10);
}

#[test]
fn pure_state_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let a = 1.0 / 3f64.sqrt();
    let file = serde_json::json!({
        "dims": [2, 2, 2],
        "re": [0.0, a, a, 0.0, a, 0.0, 0.0, 0.0],
        "im": vec![0.0; 8],
    });
    std::fs::write(&path, file.to_string()).unwrap();
    let o = concbound(&["bound", "--state", path.to_str().unwrap(), "--mode", "obs2", "--operators", "w"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let from_file = field(&stdout(&o), "bound on C^2:");
    let family = concbound(&["bound", "--state", "family:w", "--mode", "obs2"]);
    assert!((from_file - field(&stdout(&family), "bound on C^2:")).abs() < 1e-12);
    assert!(stdout(&o).contains("verdict: ENTANGLED"));
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        &["bound", "--state", "family:nope"][..],
        &["bound", "--state", "/definitely/missing.json"],
        &["bound", "--state", "family:ghz-noise,p=2"],
        &["bound", "--state", "family:ghz", "--mode", "wootters"],
        &["bound", "--state", "family:werner,p=0.5", "--k", "0"],
        &["bound", "--state", "family:werner", "--optimizer", "{\"restarts\": 0}"],
        &["scan", "--family", "w-noise", "--p-range", "0.5:0.1"],
    ] {
        let o = concbound(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn json_record_roundtrips_and_replays() {
    let o = concbound(&[
        "bound", "--state", "family:w-noise,p=0.9", "--mode", "obs2", "--format", "json",
        "--optimizer", "{\"restarts\": 2, \"iterations\": 20}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let record: RunRecord = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(record.command.first().map(String::as_str).map(|c| c.ends_with("concbound")), Some(true));
    let RunResult::Bound(b) = &record.result else { panic!("bound result expected") };
    assert!(b.verdict_is_consistent());
    assert_eq!(replay_verdict(&record), Some(b.verdict));
    let report = b.report.as_ref().unwrap();
    assert!((report.recompute() - report.bound_on_c_squared).abs() < 1e-15);
    assert_eq!(report.config.as_ref().unwrap().restarts, 2);
}

#[test]
fn out_file_gets_record_and_stdout_gets_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = concbound(&["bound", "--state", "family:werner,p=0.8", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: ENTANGLED"));
    let rec = read_record(&path);
    assert_eq!(replay_verdict(&rec), Some(Verdict::Entangled));
}

#[test]
fn csv_bound_has_header() {
    let o = concbound(&["bound", "--state", "family:werner,p=0.2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("verdict"));
    assert!(lines.next().unwrap().ends_with("UNDETECTED"));
}

#[test]
fn seed_override_reaches_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_concbound"))
        .args(["bound", "--state", "family:werner,p=0.9", "--optimizer", "{\"restarts\": 2, \"iterations\": 5}"])
        .args(["--out", path.to_str().unwrap()])
        .env("CONCBOUND_SEED", "0x2a")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let RunResult::Bound(b) = read_record(&path).result else { panic!() };
    assert_eq!(b.report.unwrap().config.unwrap().seed, 42);

    let bad = Command::new(env!("CARGO_BIN_EXE_concbound"))
        .args(["bound", "--state", "family:werner"])
        .env("CONCBOUND_SEED", "forty-two")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn w_scan_csv_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv_path = dir.path().join(format!("{name}.csv"));
        let rec_path = dir.path().join(format!("{name}.json"));
        let o = concbound(&[
            "scan", "--family", "w-noise", "--mode", "obs2", "--p-range", "0.15:0.25", "--tol", "1e-4",
            "--out", csv_path.to_str().unwrap(), "--record", rec_path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("# threshold"));
        (std::fs::read_to_string(&csv_path).unwrap(), read_record(&rec_path))
    };
    let (csv_text, record) = run("first");
    let lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(lines[0], "p,bound,ppt_min_eig_worst_split");
    let summary = lines.last().unwrap();
    assert!((threshold(summary) - 0.17797).abs() < 2e-4, "{summary}");
    let ps: Vec<f64> = lines[1..lines.len() - 1]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ps.windows(2).all(|w| w[0] <= w[1]));
    let RunResult::Scan(s) = record.result else { panic!() };
    assert_eq!(s.rows.len(), ps.len());

    // Same arguments, same bytes.
    assert_eq!(run("second").0, csv_text);
}

#[test]
fn ppt_scan_on_w_noise() {
    let o = concbound(&["scan", "--family", "w-noise", "--mode", "ppt", "--p-range", "0.15:0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!((threshold(text.lines().last().unwrap()) - 0.209589).abs() < 1e-4, "{text}");
    // No bound column in ppt scans.
    assert!(text.lines().nth(1).unwrap().contains(",,"));
}

#[test]
fn undetectable_scan_exits_three() {
    let o = concbound(&[
        "scan", "--family", "horodecki:a=0.5", "--optimizer", "{\"restarts\": 2, \"iterations\": 10}",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn demos() {
    let o = concbound(&["demo", "wootters-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));

    let o = concbound(&["demo", "ghz"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // With single-generator subsets the bound cannot see this state.
    let o = concbound(&["demo", "horodecki"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}
