use std::process::{Command, Output};

use serde_json::Value;

fn aoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let output = aoi(args);
    assert!(output.status.success(), "{args:?} failed: {}", stderr(&output));
    stdout(&output)
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

/// CSV and JSON runs of the same command agree cell by cell.
fn assert_formats_agree(args: &[&str]) {
    let csv_text = ok(&[args, &["--format", "csv"]].concat());
    let json: Value = serde_json::from_str(&ok(&[args, &["--format", "json"]].concat())).unwrap();
    let (header, rows) = csv_rows(&csv_text);
    let objects = json.as_array().unwrap();
    assert_eq!(rows.len(), objects.len());
    for (row, object) in rows.iter().zip(objects) {
        for (name, cell) in header.iter().zip(row) {
            let value = &object[name.as_str()];
            match value {
                Value::Null => assert!(cell.is_empty(), "{name}"),
                Value::String(s) => assert_eq!(s, cell),
                other => {
                    let x: f64 = cell.parse().unwrap();
                    let y = other.as_f64().unwrap_or_else(|| panic!("{name}: {other}"));
                    assert!((x - y).abs() <= 1e-12, "{name}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn mean_prints_six_decimals() {
    assert_eq!(ok(&["mean", "--p", "0.2", "--gamma", "0.5", "--size", "inf"]), "6.266667\n");
    assert_eq!(ok(&["mean", "--p", "0.2", "--gamma", "0.5", "--size", "1", "--precision", "3"]), "6.333\n");
}

#[test]
fn mean_with_continuous_baseline() {
    let text = ok(&[
        "mean", "--p", "0.2", "--gamma", "0.5", "--size", "inf", "--continuous", "--mu", "1", "--rho", "0.5",
    ]);
    assert_eq!(text, "6.266667\n3.500000\n");
}

#[test]
fn pmf_rows() {
    let text = ok(&["pmf", "--p", "0.2", "--gamma", "0.5", "--size", "1", "--nmax", "2", "--format", "csv"]);
    assert_eq!(text, "n,pmf\n1,0.083333\n2,0.116667\n");
}

#[test]
fn cdf_is_monotone_and_ends_near_one() {
    let (_, rows) = csv_rows(&ok(&["cdf", "--p", "0.2", "--gamma", "0.5", "--size", "inf", "--nmax", "200"]));
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(values.len(), 200);
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(values[199], 1.0);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["pmf", "--p", "1.5", "--gamma", "0.5", "--size", "1"],
        &["mean", "--p", "0.2", "--gamma", "0.5", "--size", "3"],
        &["mean", "--size", "3"],
        &["mean", "--p", "0.2", "--gamma", "0.5", "--size", "1", "--verbose"],
        &["mean", "--p", "0.2", "--gamma", "0.5", "--size", "two"],
        &["simulate", "--p", "0.2", "--gamma", "0.5", "--capacity", "0"],
        &["sweep", "--gamma", "0.5", "--rho-min", "0.9", "--rho-max", "0.1"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let output = aoi(args);
        assert_eq!(output.status.code(), Some(2), "{args:?}: {}", stderr(&output));
        assert!(output.stdout.is_empty());
    }
    let output = aoi(&["pmf", "--p", "1.5", "--gamma", "0.5", "--size", "1"]);
    assert!(stderr(&output).contains("--p"));
    let output = aoi(&["mean", "--p", "0.2", "--gamma", "0.5", "--size", "3"]);
    assert!(stderr(&output).contains("1 and inf"));
}

#[test]
fn model_errors_exit_1_with_kind() {
    let output = aoi(&["mean", "--p", "0.5", "--gamma", "0.2", "--size", "inf"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("Unstable"), "{}", stderr(&output));
    // the bufferless system is stable for any p
    assert!(aoi(&["mean", "--p", "0.5", "--gamma", "0.2", "--size", "1"]).status.success());
}

#[test]
fn formats_agree() {
    assert_formats_agree(&["pmf", "--p", "0.2", "--gamma", "0.5", "--size", "inf", "--nmax", "30"]);
    assert_formats_agree(&["cdf", "--p", "0.3", "--gamma", "0.4", "--size", "1", "--nmax", "30"]);
    assert_formats_agree(&["sweep", "--gamma", "0.5", "--steps", "17"]);
    assert_formats_agree(&["chain", "--p", "0.2", "--gamma", "0.5", "--nmax", "40", "--full"]);
    assert_formats_agree(&["mean", "--p", "0.2", "--gamma", "0.5", "--size", "1"]);
    assert_formats_agree(&["optimal-rho", "--gamma", "0.5", "--size", "1"]);
}

#[test]
fn simulate_json_and_csv_agree() {
    let base = ["simulate", "--p", "0.2", "--gamma", "0.5", "--slots", "50000", "--warmup", "1000", "--nmax", "40"];
    let report: Value = serde_json::from_str(&ok(&base)).unwrap();
    for key in ["p", "gamma", "capacity", "slots", "warmup", "seed", "tie_rule", "mean", "pmf"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["capacity"], "inf");
    assert_eq!(report["tie_rule"], "block-on-full");
    let (header, rows) = csv_rows(&ok(&[&base[..], &["--format", "csv"]].concat()));
    assert_eq!(header, ["n", "mass"]);
    let pmf = report["pmf"].as_array().unwrap();
    assert_eq!(pmf.len(), 40);
    for (row, pair) in rows.iter().zip(pmf) {
        assert_eq!(row[0].parse::<u64>().unwrap(), pair[0].as_u64().unwrap());
        let x: f64 = row[1].parse().unwrap();
        assert!((x - pair[1].as_f64().unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = ["simulate", "--p", "0.3", "--gamma", "0.6", "--capacity", "2", "--slots", "30000", "--seed", "9"];
    let first = aoi(&args);
    let second = aoi(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let other = aoi(&["simulate", "--p", "0.3", "--gamma", "0.6", "--capacity", "2", "--slots", "30000", "--seed", "10"]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn simulate_tie_rule_flag() {
    let base = ["simulate", "--p", "0.3", "--gamma", "0.6", "--size", "1", "--slots", "30000"];
    let block: Value = serde_json::from_str(&ok(&base)).unwrap();
    let accept: Value =
        serde_json::from_str(&ok(&[&base[..], &["--tie-rule", "accept-after-departure"]].concat())).unwrap();
    assert_eq!(block["capacity"], 1);
    assert_eq!(accept["tie_rule"], "accept-after-departure");
    assert!(block["drops"].as_u64().unwrap() > accept["drops"].as_u64().unwrap());
    assert_eq!(aoi(&[&base[..], &["--tie-rule", "coin-flip"]].concat()).status.code(), Some(2));
}

#[test]
fn chain_marginal_matches_closed_form() {
    let (_, chain) = csv_rows(&ok(&["chain", "--p", "0.2", "--gamma", "0.5", "--nmax", "200", "--precision", "10"]));
    let (_, closed) = csv_rows(&ok(&[
        "pmf", "--p", "0.2", "--gamma", "0.5", "--size", "inf", "--nmax", "50", "--precision", "10",
    ]));
    for (a, b) in chain.iter().zip(&closed) {
        assert_eq!(a[0], b[0]);
        let (x, y): (f64, f64) = (a[1].parse().unwrap(), b[1].parse().unwrap());
        assert!((x - y).abs() <= 2e-10, "n = {}: {x} vs {y}", a[0]);
    }
}

#[test]
fn sweep_keeps_grid_order() {
    let (header, rows) = csv_rows(&ok(&["sweep", "--gamma", "0.5", "--rho-min", "0.1", "--rho-max", "0.9", "--steps", "9"]));
    assert_eq!(header, ["rho", "discrete_1", "discrete_inf", "continuous_1", "continuous_inf"]);
    let rhos: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let expected: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    assert_eq!(rhos, expected);
    // gamma * mean at rho = 0.5, gamma = 0.5: 2.75 unbounded, 3.5 continuous
    assert_eq!(rows[4][2], "2.750000");
    assert_eq!(rows[4][4], "3.500000");
}

#[test]
fn optimal_rho_outputs() {
    assert_eq!(ok(&["optimal-rho", "--gamma", "0.5", "--size", "inf"]), "0.606085\n");
    assert_eq!(ok(&["optimal-rho", "--gamma", "0.5", "--size", "1"]), "decreasing\n");
}

#[test]
fn out_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let args = ["sweep", "--gamma", "0.3", "--steps", "5", "--format", "json"];
    let output = aoi(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), ok(&args));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn unwritable_out_exits_1() {
    let output = aoi(&["pmf", "--p", "0.2", "--gamma", "0.5", "--size", "1", "--out", "/nonexistent-dir/x/out.csv"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("IoError"));
}

#[test]
fn validate_quick_passes() {
    let output = aoi(&["validate", "--p", "0.2", "--gamma", "0.5", "--quick"]);
    let text = stdout(&output);
    assert!(output.status.success(), "{text}\n{}", stderr(&output));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8, "{text}");
    assert!(lines.iter().all(|l| l.starts_with("[PASS]")), "{text}");
}
