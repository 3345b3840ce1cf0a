use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lmg_cli::Table;
use serde_json::Value;

fn lmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn table_from(out: &Output) -> Table {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::read_csv(out.stdout.as_slice()).unwrap()
}

fn read_table(path: &Path) -> Table {
    Table::read_csv(fs::File::open(path).unwrap()).unwrap()
}

#[test]
fn trace_near_one_in_broken_phase() {
    let out = lmg(&["trace", "--n", "5000", "--lambda", "0.5", "--case", "case-i", "--methods", "exact"]);
    let table = table_from(&out);
    assert_eq!(table.headers, ["t", "purity_exact"]);
    assert_eq!(table.rows.len(), 2001);
    assert_eq!(table.rows[0], [0.0, 1.0]);
    for p in table.column("purity_exact").unwrap() {
        assert!((p - 1.0).abs() <= 5e-3);
    }
}

#[test]
fn trace_exact_matches_oracle_columns() {
    let out = lmg(&["trace", "--n", "12", "--lambda", "2", "--methods", "exact,oracle", "--t-count", "301"]);
    let table = table_from(&out);
    assert_eq!(table.headers, ["t", "purity_exact", "purity_oracle"]);
    for row in &table.rows {
        assert!((row[1] - row[2]).abs() <= 1e-10);
    }
    assert_eq!(table.rows[0][1], 1.0);
    assert_eq!(table.rows[0][2], 1.0);
}

#[test]
fn csv_layout() {
    let out = lmg(&["trace", "--n", "40", "--lambda", "1.5", "--methods", "exact,closed-form,hp-limit", "--t-count", "11"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("t,purity_exact,purity_closed_form,purity_hp_limit\n"));
    assert!(!text.contains('\r'));
    assert!(text.lines().all(|l| !l.ends_with(',')));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn json_output_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let json = dir.path().join("a.json");
    let common = ["trace", "--n", "30", "--lambda", "2", "--methods", "exact,closed-form", "--t-count", "51"];
    let mut args = common.to_vec();
    args.extend(["--output", csv.to_str().unwrap()]);
    assert!(lmg(&args).status.success());
    let mut args = common.to_vec();
    args.extend(["--output", json.to_str().unwrap(), "--format", "json"]);
    assert!(lmg(&args).status.success());

    let value: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let (from_json, meta) = Table::from_json(&value).unwrap();
    assert_eq!(from_json, read_table(&csv));
    assert_eq!(meta["n"], 30);
    assert_eq!(meta["case"], "case-i");
}

#[test]
fn sweep_shows_the_transition() {
    let out = lmg(&["sweep", "--n", "5000", "--lambda", "0.2:2:10", "--case", "case-i"]);
    let table = table_from(&out);
    assert_eq!(table.headers, ["lambda", "t", "purity_exact"]);
    assert_eq!(table.rows.len(), 10 * 2001);
    let below = table
        .rows
        .iter()
        .filter(|r| r[0] < 1.0)
        .map(|r| r[2])
        .fold(f64::INFINITY, f64::min);
    let at_two = table
        .rows
        .iter()
        .filter(|r| r[0] == 2.0)
        .map(|r| r[2])
        .fold(f64::INFINITY, f64::min);
    assert!(below >= 0.995, "{below}");
    assert!(at_two <= 0.55, "{at_two}");
    let lambdas = table.column("lambda").unwrap();
    assert!(lambdas.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_jobs() {
    let args = ["sweep", "--n", "300", "--lambda", "0.5:3:7", "--case", "case-ii", "--methods", "exact,closed-form", "--t-count", "101"];
    let runs: Vec<Vec<u8>> = ["1", "3", "0", "1"]
        .iter()
        .map(|jobs| {
            let mut a = args.to_vec();
            a.extend(["--jobs", jobs]);
            let out = lmg(&a);
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn single_point_sweep_equals_trace() {
    let args = ["--n", "64", "--lambda", "0.8", "--t-count", "21"];
    let sweep = lmg(&[&["sweep"], &args[..]].concat());
    let trace = lmg(&[&["trace"], &args[..]].concat());
    assert!(sweep.status.success());
    assert_eq!(sweep.stdout, trace.stdout);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"n": 20, "lambda": 0.7, "case": "case-ii", "methods": ["exact", "closed-form"],
            "t": {"start": 0, "stop": 5, "count": 11}}"#,
    )
    .unwrap();
    let table = table_from(&lmg(&["trace", "--config", cfg.to_str().unwrap()]));
    assert_eq!(table.rows.len(), 11);
    assert_eq!(table.rows[10][0], 5.0);
    let table = table_from(&lmg(&["trace", "--config", cfg.to_str().unwrap(), "--t-count", "6"]));
    assert_eq!(table.rows.len(), 6);
    assert_eq!(table.rows[5][0], 5.0);
}

fn assert_one_line_error(out: &Output, code: i32, kind: &str) {
    assert_eq!(out.status.code(), Some(code), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{kind}]")), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_exit_one() {
    assert_one_line_error(&lmg(&["trace", "--n", "64", "--methods", "oracle"]), 1, "config");
    assert_one_line_error(&lmg(&["trace", "--case", "explicit"]), 1, "config");
    assert_one_line_error(&lmg(&["trace", "--lambda", "0.5:2:4"]), 1, "config");
    assert_one_line_error(&lmg(&["trace", "--t-start", "3", "--t-stop", "1"]), 1, "config");
    assert_one_line_error(&lmg(&["trace", "--methods", "magic"]), 1, "config");
    assert_one_line_error(&lmg(&["trace", "--bogus"]), 1, "config");
    assert_eq!(lmg(&["trace", "--n", "20", "--lambda", "2", "--methods", "hp-limit", "--case", "case-ii"]).status.code(), Some(0));
    assert_eq!(lmg(&["trace", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn unreadable_config_and_output_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_one_line_error(&lmg(&["trace", "--config", missing.to_str().unwrap()]), 3, "io");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("out.csv");
    assert_one_line_error(&lmg(&["trace", "--n", "10", "--output", out.to_str().unwrap()]), 3, "io");
}

fn figure(dir: &Path, name: &str) -> (Table, Value) {
    let out = lmg(&["figures", "--fig", name, "--output", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_table(&dir.join(format!("{name}.csv")));
    let sidecar: Value =
        serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.params.json"))).unwrap()).unwrap();
    (table, sidecar)
}

#[test]
fn fig2_periods_and_depth() {
    let dir = tempfile::tempdir().unwrap();
    let (table, sidecar) = figure(dir.path(), "fig2");
    assert_eq!(table.headers, ["lambda", "t", "purity_exact"]);
    assert_eq!(sidecar["n"], 5000);
    assert_eq!(sidecar["case"], "case-i");
    let curves = sidecar["curves"].as_array().unwrap();
    let periods: Vec<f64> = curves.iter().map(|c| c["period"].as_f64().unwrap()).collect();
    assert_eq!(periods.len(), 5);
    assert!(periods.windows(2).all(|w| w[1] < w[0]), "{periods:?}");
    let last = &curves[4];
    assert_eq!(last["lambda"], 5.0);
    let min5 = table
        .rows
        .iter()
        .filter(|r| r[0] == 5.0)
        .map(|r| r[2])
        .fold(f64::INFINITY, f64::min);
    assert!((0.5..=0.52).contains(&min5), "{min5}");
    assert_eq!(last["min_purity"].as_f64().unwrap(), min5);
}

#[test]
fn fig4_respects_purity_bound() {
    let dir = tempfile::tempdir().unwrap();
    let (table, sidecar) = figure(dir.path(), "fig4");
    assert_eq!(sidecar["n"], 1000);
    assert_eq!(sidecar["case"], "case-ii");
    assert_eq!(table.rows.len(), 4 * 2001);
    for row in &table.rows {
        assert!(row[2] >= 0.5 - 1e-9 && row[2] <= 1.0 + 1e-12);
    }
}

#[test]
fn all_figures_stay_in_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmg(&["figures", "--output", dir.path().to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    for name in ["fig1", "fig2", "fig3", "fig4"] {
        let value: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap()).unwrap();
        let (table, meta) = Table::from_json(&value).unwrap();
        assert_eq!(meta["figure"], name);
        for p in table.column("purity_exact").unwrap() {
            assert!((0.5 - 1e-9..=1.0 + 1e-12).contains(&p), "{name}: {p}");
        }
        assert!(dir.path().join(format!("{name}.params.json")).exists());
    }
    let fig1: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig1.params.json")).unwrap()).unwrap();
    assert_eq!(fig1["lambda"].as_array().unwrap().len(), 181);
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(lmg(&["figures", "--fig", "fig3", "--output", a.path().to_str().unwrap(), "--jobs", "1"]).status.success());
    assert!(lmg(&["figures", "--fig", "fig3", "--output", b.path().to_str().unwrap(), "--jobs", "4"]).status.success());
    for f in ["fig3.csv", "fig3.params.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn validate_passes_and_reports_every_comparison() {
    let out = lmg(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("comparison,n,lambda,case,deviation,tolerance,pass"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    for cmp in [
        "exact-vs-closed-form",
        "exact-vs-oracle",
        "full-spin-vs-oracle",
        "exact-vs-hp-limit",
        "hp-limit-convergence",
        "hp-time-convention-full-vs-half",
        "broken-rabi-frequency",
    ] {
        assert!(rows.iter().any(|r| r[0] == cmp), "missing {cmp}");
    }
    assert!(rows.iter().all(|r| r[6] == "true"));
    for r in rows.iter().filter(|r| r[0] == "exact-vs-closed-form") {
        assert!(r[4].parse::<f64>().unwrap() <= 1e-12);
    }
    let hp: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "exact-vs-hp-limit" && r[3] == "case-ii")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(hp.len(), 4);
    assert!(hp.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn validate_includes_the_requested_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = lmg(&["validate", "--n", "10", "--lambda", "3", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert!(rows
        .iter()
        .any(|r| r["comparison"] == "exact-vs-oracle" && r["n"] == 10 && r["lambda"] == 3.0));
}

#[test]
fn help_and_version_succeed() {
    assert!(lmg(&["--help"]).status.success());
    assert!(lmg(&["--version"]).status.success());
    assert!(lmg(&["sweep", "--help"]).status.success());
}
