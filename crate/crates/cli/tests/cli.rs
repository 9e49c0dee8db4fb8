use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ising-qsim"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("ISING_QSIM_MAX_QUBITS").output().unwrap()
}

fn run_model(cmd: &str, model: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--model", model.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header_value(text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in report"))
        .to_string()
}

fn temp_model(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn prepare_reproduces_squared_reference_amplitudes() {
    let o = run_model("prepare", &fixture("table1.toml"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let (x, c) = (0.35f64.exp(), 2.0 * 0.7f64.cosh());
    // Last column, rows |−−−−⟩ … |++++⟩ with spin 1 leftmost; magnitudes x^{±1,±3}.
    let exps = [3, 1, -1, 1, -1, -3, -1, 1, 1, -1, -3, -1, 1, -1, 1, 3];
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 16);
    for row in rows {
        let label: usize = row[0].chars().fold(0, |acc, ch| acc << 1 | usize::from(ch == '1'));
        let expect = x.powi(2 * exps[label]) / (2.0 * c.powi(3));
        let p: f64 = row[1].parse().unwrap();
        assert!((p - expect).abs() < 1e-12, "{}: {p} vs {expect}", row[0]);
    }
    assert_eq!(header_value(&text, "pass"), "true");
}

#[test]
fn prepare_at_infinite_temperature_is_uniform() {
    let o = run_model("prepare", &fixture("infinite-temperature.toml"), &[]);
    assert!(o.status.success());
    for row in csv_rows(&stdout(&o)) {
        assert!((row[1].parse::<f64>().unwrap() - 1.0 / 32.0).abs() < 1e-10);
    }
}

#[test]
fn prepare_reports_deviation_for_glass_with_fields() {
    let o = run_model("prepare", &fixture("gaussian-glass.toml"), &["--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(v["max_abs_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["rows"].as_array().unwrap().len(), 256);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["model_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn prepare_covers_every_topology() {
    for name in [
        "binary-tree.toml",
        "frustrated-triangle.toml",
        "pm-ring-6.toml",
        "square-2x4.toml",
    ] {
        for seed in ["0", "1"] {
            let o = run_model("prepare", &fixture(name), &["--seed", seed, "--json"]);
            assert!(o.status.success(), "{name}: {}", stderr(&o));
            assert!(json(&o)["max_abs_deviation"].as_f64().unwrap() < 1e-10);
        }
    }
    let o = run_model(
        "prepare",
        &fixture("pm-ring-6.toml"),
        &["--policy", "measure", "--json"],
    );
    assert!(o.status.success());
    assert_eq!(json(&o)["realized_bonds"].as_array().unwrap().len(), 1);
}

#[test]
fn beta_override_changes_the_report() {
    let o = run_model("prepare", &fixture("table1.toml"), &["--beta", "2.5", "--json"]);
    let v = json(&o);
    assert_eq!(v["beta"], 2.5);
    assert!(v["max_abs_deviation"].as_f64().unwrap() < 1e-10);
}

#[test]
fn one_sample_gives_one_row() {
    let o = run_model("sample", &fixture("table1.toml"), &["--samples", "1"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "1");
}

#[test]
fn fixed_seed_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.csv"));
        let o = run_model(
            "sample",
            &fixture("square-2x4.toml"),
            &["--samples", "20000", "--seed", "42", "--out", out.to_str().unwrap()],
        );
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let other = run_model(
        "sample",
        &fixture("square-2x4.toml"),
        &["--samples", "20000", "--seed", "43"],
    );
    assert_ne!(other.stdout, outputs[0]);
}

#[test]
fn ferro_chain_histogram_is_close_to_oracle() {
    let o = run_model(
        "sample",
        &fixture("ferro-chain-6.toml"),
        &["--samples", "100000", "--seed", "5", "--json"],
    );
    assert!(o.status.success());
    let v = json(&o);
    assert!(v["tv_distance"].as_f64().unwrap() < 0.02);
    assert_eq!(v["samples"], 100000);
    let total: u64 = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 100000);
}

#[test]
fn groundstate_reports() {
    let o = run_model("groundstate", &fixture("ferro-chain-8.toml"), &["--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["energy"], -7.0);
    assert!(["00000000", "11111111"].contains(&v["config"].as_str().unwrap()));

    let o = run_model("groundstate", &fixture("frustrated-triangle.toml"), &["--seed", "9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("energy: -1\n"), "{text}");
    assert!(text.contains("verified: true\n"));
    assert!(text.contains("seed: 9\n"));

    let o = run_model(
        "groundstate",
        &fixture("ferro-chain-6.toml"),
        &["--beta", "40", "--json"],
    );
    assert_eq!(json(&o)["attempts"], 1);
}

#[test]
fn verify_suites_pass() {
    for suite in ["commutators", "table1", "angles", "recursion"] {
        let o = run(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.lines().any(|l| l.starts_with("PASS")));
        assert!(!text.contains("FAIL"));
    }
    let o = run(&["verify", "all", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() > 50);
}

#[test]
fn malformed_model_reports_line() {
    let f = temp_model("sites = 3\nbeta = 1.0\ntopology = \"open-chain\"\nbondz = []\n");
    let o = run_model("prepare", f.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bondz") && err.contains("line 4"), "{err}");

    let f = temp_model("sites = 3\nbeta = 1.0\ntopology = \"open-chain\"\nbonds = [[0, 5, 1.0]]\n");
    assert_eq!(run_model("prepare", f.path(), &[]).status.code(), Some(2));
    assert_eq!(
        run_model("prepare", Path::new("/nonexistent.toml"), &[]).status.code(),
        Some(2)
    );
}

#[test]
fn unsupported_combinations_are_rejected() {
    let f = temp_model(
        "sites = 3\nbeta = 1.0\ntopology = \"closed-chain\"\nbonds = [[0, 1, 1.0], [1, 2, 1.0], [2, 0, 1.0]]\nfields = [0.1, 0.0, 0.0]\n",
    );
    let o = run_model("prepare", f.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fields"));
    let o = run_model("prepare", &fixture("table1.toml"), &["--policy", "measure"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--policy"));
    let f = temp_model("sites = 3\nbeta = 1.0\ntopology = \"general\"\nbonds = [[0, 1, 1.0]]\n");
    assert_eq!(run_model("prepare", f.path(), &[]).status.code(), Some(2));
}

#[test]
fn register_cap_comes_from_environment() {
    let model = fixture("ferro-chain-8.toml");
    let o = bin()
        .args(["prepare", "--model", model.to_str().unwrap()])
        .env("ISING_QSIM_MAX_QUBITS", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("register"), "{}", stderr(&o));
}
