use std::path::Path;
use std::process::{Command, Output};

use macroent_core::bosegas::{FractionProbe, TransitionReport};
use macroent_core::models::{Boundary, ChainSpec, Model};
use macroent_core::oracle::{max_abs_exchange_over_products, OracleReport};
use macroent_core::order::{CorrelationSeries, DecayClass, DecayClassification};
use macroent_core::units::K_B_MEV_PER_K;
use macroent_core::witness::{sweep, witness_point, PhaseCell, PhaseDiagram};
use serde_json::Value;

const HEADER: &str = "T,B,U,M,chi,energy_margin,chi_margin,energy_verdict,chi_verdict";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_macroent")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn parse_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn sweep_csv_layout() {
    let csv = stdout(&["sweep", "--model", "xxx", "--sites", "8", "--t-axis", "0.5:2:4", "--b-axis", "0:6:3"]);
    assert_eq!(csv.lines().next().unwrap(), HEADER);
    let rows = parse_rows(&csv);
    assert_eq!(rows.len(), 12);
    // B-major: T runs fastest
    let key: Vec<(f64, f64)> = rows.iter().map(|r| (r[1].parse().unwrap(), r[0].parse().unwrap())).collect();
    let mut sorted = key.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(key, sorted);
    assert!(rows.iter().all(|r| r.len() == 9
        && ["entangled", "unknown"].contains(&r[7].as_str())
        && ["entangled", "unknown"].contains(&r[8].as_str())));
    assert_eq!(rows[0][7], "entangled");
}

#[test]
fn single_cell_sweep_matches_witness() {
    let chain = ["--model", "alternating", "--j1", "1", "--j2", "0.25", "--sites", "6", "--boundary", "periodic"];
    let mut sweep_args = vec!["sweep", "--t-axis", "0.7:0.7:1", "--b-axis", "1.5:1.5:1"];
    sweep_args.extend(chain);
    let mut witness_args = vec!["witness", "--temp", "0.7", "--field", "1.5", "--format", "csv"];
    witness_args.extend(chain);
    let a = stdout(&sweep_args);
    let b = stdout(&witness_args);
    assert_eq!(a, b);
    assert_eq!(parse_rows(&a).len(), 1);

    witness_args.truncate(5);
    witness_args.extend(chain);
    let v = json(&witness_args);
    let row = &parse_rows(&a)[0];
    assert_eq!(v["thermo"]["u"].as_f64().unwrap(), row[2].parse::<f64>().unwrap());
    assert_eq!(v["energy"]["margin"].as_f64().unwrap(), row[5].parse::<f64>().unwrap());
    assert_eq!(v["susceptibility"]["margin"].as_f64().unwrap(), row[6].parse::<f64>().unwrap());
}

#[test]
fn invalid_axis_is_a_config_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out_arg = path.to_str().unwrap();
    for axis in ["0:2:5", "-1:1:3", "2:1:3", "1:2"] {
        let out = run(&["sweep", "--t-axis", axis, "--out", out_arg]);
        assert_eq!(out.status.code(), Some(2), "{axis}");
        assert!(!path.exists());
    }
    let out = run(&["sweep", "--t-axis", "1:2:2", "--out", out_arg]);
    assert!(out.status.success());
    assert!(path.exists());
}

#[test]
fn bad_models_are_config_errors() {
    for args in [
        &["witness", "--temp", "1", "--sites", "1"][..],
        &["witness", "--temp", "1", "--model", "alternating", "--j1", "1"],
        &["witness", "--temp", "1", "--model", "alternating", "--j1", "1", "--j2", "0.5", "--sites", "5"],
        &["witness", "--temp", "0"],
        &["witness", "--temp", "1", "--j", "0"],
        &["certify", "--restarts", "0"],
        &["corr", "--temp", "1", "--sites", "6", "--boundary", "periodic"],
        &["corr", "--temp", "1", "--op", "full-dot", "--connected"],
        &["bose", "--dim", "0"],
        &["bose", "--regions", "0"],
        &["witness", "--temp", "1", "--units", "metric"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert!(out.stdout.is_empty());
}

#[test]
fn numeric_failures_exit_three_and_name_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out =
        run(&["sweep", "--sites", "4", "--t-axis", "1:2:2", "--b-axis", "0:1e308:2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("T = 1.0, B = 1e308"), "{err}");
    assert!(!path.exists());
    assert_eq!(run(&["bose", "--epsilon", "0.5"]).status.code(), Some(3));
}

#[test]
fn witness_json_round_trips() {
    let text = stdout(&["witness", "--model", "xx", "--sites", "5", "--temp", "0.9", "--field", "0.3"]);
    let cell: PhaseCell = serde_json::from_str(&text).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let spec: ChainSpec = serde_json::from_value(v["spec"].clone()).unwrap();
    assert_eq!(spec, ChainSpec::new(5, Model::Xx { j: 1.0 }, 0.3, Boundary::Open).unwrap());
    assert_eq!(cell, witness_point(&spec, 0.9).unwrap());
    let again: PhaseCell = serde_json::from_str(&serde_json::to_string(&cell).unwrap()).unwrap();
    assert_eq!(again, cell);
}

#[test]
fn sweep_json_round_trips() {
    let text = stdout(&["sweep", "--sites", "6", "--t-axis", "0.3:3:5", "--b-axis", "0:4:3", "--format", "json"]);
    let diagram: PhaseDiagram = serde_json::from_str(&text).unwrap();
    let spec = ChainSpec::new(6, Model::Xxx { j: 1.0 }, 0.0, Boundary::Open).unwrap();
    let direct = sweep(&spec, &diagram.t_axis, &diagram.b_axis).unwrap();
    assert_eq!(diagram, direct);
}

#[test]
fn physical_units_rescale_temperature_only() {
    let j = 0.11;
    let t_kelvin = 4.2;
    let physical = stdout(&[
        "witness", "--units", "physical", "--j", "0.11", "--sites", "6", "--temp", "4.2", "--field", "0.05",
        "--format", "csv",
    ]);
    let t_mev = (t_kelvin * K_B_MEV_PER_K).to_string();
    let natural = stdout(&[
        "witness",
        "--j",
        &j.to_string(),
        "--sites",
        "6",
        "--temp",
        &t_mev,
        "--field",
        "0.05",
        "--format",
        "csv",
    ]);
    let p = &parse_rows(&physical)[0];
    let n = &parse_rows(&natural)[0];
    let close = |a: &str, b: &str, scale: f64| {
        let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
        assert!((a - b * scale).abs() <= 1e-10 * a.abs().max(1e-300), "{a} vs {b}");
    };
    close(&p[0], &n[0], 1.0 / K_B_MEV_PER_K);
    assert!((p[0].parse::<f64>().unwrap() - t_kelvin).abs() < 1e-12);
    for k in 1..7 {
        close(&p[k], &n[k], 1.0);
    }
    assert_eq!(p[7..], n[7..]);

    let bose_natural = json(&["bose", "--dim", "3"]);
    let bose_physical = json(&["bose", "--dim", "3", "--units", "physical"]);
    for key in ["t_trans", "t_crit", "t_bec"] {
        let a = bose_physical[key].as_f64().unwrap();
        let b = bose_natural[key].as_f64().unwrap() / K_B_MEV_PER_K;
        assert!((a - b).abs() <= 1e-10 * b, "{key}");
    }
    assert_eq!(bose_physical["ratio_crit_over_bec"], bose_natural["ratio_crit_over_bec"]);
}

#[test]
fn bose_report() {
    let text = stdout(&["bose", "--dim", "2", "--particles", "500", "--regions", "5", "--volume", "50"]);
    assert!(text.contains("\"t_bec\": 0.0"), "{text}");
    let report: TransitionReport = serde_json::from_str(&text).unwrap();
    assert!(report.ratio_crit_over_bec.is_none());
    assert!(report.t_trans > 0.0 && report.t_trans.is_finite());
    let v: Value = serde_json::from_str(&text).unwrap();
    let probes: Vec<FractionProbe> = serde_json::from_value(v["probes"].clone()).unwrap();
    assert_eq!(probes.iter().map(|p| p.dimension).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert_eq!(v["density_exponent"].as_f64(), Some(1.0));

    let three: TransitionReport = serde_json::from_str(&stdout(&["bose"])).unwrap();
    assert!(three.ratio_crit_over_bec.unwrap() > 1.0);
}

#[test]
fn corr_outputs() {
    let args = ["corr", "--sites", "10", "--temp", "10", "--connected"];
    let v = json(&args);
    let series: CorrelationSeries = serde_json::from_value(v["series"].clone()).unwrap();
    let fit: DecayClassification = serde_json::from_value(v["classification"].clone()).unwrap();
    assert_eq!(series.separations, (1..=9).collect::<Vec<_>>());
    assert_eq!(fit.class, DecayClass::Exponential);

    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = run(&csv_args);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("r,C"));
    let values: Vec<f64> = parse_rows(&csv).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(values, series.values);
    let fit_line: DecayClassification = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(fit_line, fit);
}

#[test]
fn certify_ring_dimer_saturates() {
    let text = stdout(&["certify", "--sites", "2", "--boundary", "periodic", "--restarts", "200", "--seed", "9"]);
    let report: OracleReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.bound, 2.0);
    assert!(report.gap.abs() <= 1e-8, "{}", report.gap);
    let spec = ChainSpec::new(2, Model::Xxx { j: 1.0 }, 0.0, Boundary::Periodic).unwrap();
    assert_eq!(report, max_abs_exchange_over_products(&spec, 200, 9).unwrap());
}

#[test]
fn violated_bound_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let args = [
        "certify",
        "--sites",
        "4",
        "--boundary",
        "periodic",
        "--restarts",
        "50",
        "--bound",
        "3.5",
        "--out",
        path.to_str().unwrap(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&path).exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the claimed bound"));
}
