use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvgauss"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const TMSV: &str = r#"
seed = 3
shots = 20000
efficiency = 1.0
analyses = ["entanglement", "region", "critical_efficiency", "measurement"]

[[state]]
op = "vacuum"
modes = 2

[[state]]
op = "two_mode_squeeze"
modes = [0, 1]
s = 0.5
"#;

#[test]
fn tmsv_run_reports_expected_quantities() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tmsv.toml", TMSV);
    let report = stdout_json(&run(&["run", "--config", cfg.to_str().unwrap()]));
    let exact = &report["exact"];
    let e = std::f64::consts::E;
    let sf = &exact["standard_form"];
    assert!((sf["delta1"].as_f64().unwrap() - 1.0 / e).abs() < 1e-12);
    assert!((sf["delta2"].as_f64().unwrap() - 1.0 / e).abs() < 1e-12);
    assert!((exact["entanglement"]["e_sympl"].as_f64().unwrap() - (e - 1.0)).abs() < 1e-9);
    assert_eq!(exact["region"], "E");
    assert_eq!(exact["eta_critical"].as_f64(), Some(0.0));
    let d = &report["estimated"]["delta"];
    let (d1, se1) = (
        d["delta1"].as_f64().unwrap(),
        d["delta1_se"].as_f64().unwrap(),
    );
    assert!((d1 - 1.0 / e).abs() < 5.0 * se1);
    assert_eq!(d["shots"], 20000);
    assert_eq!(report["estimated"]["measured_region"], "E");
}

#[test]
fn identical_config_and_seed_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tmsv.toml", TMSV);
    let strip = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    let args = ["run", "--config", cfg.to_str().unwrap()];
    let first = strip(&run(&args));
    assert_eq!(first, strip(&run(&args)));
    let reseeded = strip(&run(&[&args[..], &["--seed", "4"]].concat()));
    assert_ne!(first, reseeded);
    assert!(reseeded.contains("\"seed\":4"));
}

#[test]
fn files_are_written_to_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{TMSV}\n[output]\nsamples = \"samples.csv\"\n");
    let cfg = write_config(dir.path(), "tmsv.toml", &text);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["seed"], 3);
    let samples = std::fs::read_to_string(out_dir.join("samples.csv")).unwrap();
    assert_eq!(samples.lines().next(), Some("shot_index,value_a,value_b"));
    assert_eq!(samples.lines().count(), 20001);

    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let flat = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(flat.starts_with("key,value\n"));
    assert!(flat.contains("exact.region,E\n"));
}

#[test]
fn unphysical_state_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        "analyses = [\"purity\"]\n[[state]]\nop = \"thermal\"\noccupations = [0.5]\n",
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unphysical"));
    assert_eq!(
        code(&run(&[
            "validate-config",
            "--config",
            cfg.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn config_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_key.toml", format!("colour = \"blue\"\n{TMSV}")),
        ("unknown_step_key.toml", "[[state]]\nop = \"vacuum\"\nmodes = 1\nextra = 2\n".to_string()),
        ("bad_eta.toml", TMSV.replace("efficiency = 1.0", "efficiency = 1.5")),
        ("bad_op.toml", "[[state]]\nop = \"teleport\"\n".to_string()),
        ("bad_mode.toml", "[[state]]\nop = \"vacuum\"\nmodes = 1\n[[state]]\nop = \"squeeze\"\nmode = 3\ns = 0.1\n".to_string()),
        ("no_reference.toml", "analyses = [\"fidelity\"]\n[[state]]\nop = \"vacuum\"\nmodes = 1\n".to_string()),
        ("bad_grid.toml", "[sweep]\ndelta1 = { min = 0.0, max = 2.0, steps = 3 }\ndelta2 = { min = 0.5, max = 2.0, steps = 3 }\n".to_string()),
        ("syntax.toml", "[[state]\n".to_string()),
    ];
    for (name, text) in cases {
        let cfg = write_config(dir.path(), name, &text);
        let sub = if name == "bad_grid.toml" {
            "sweep"
        } else {
            "run"
        };
        let out = run(&[sub, "--config", cfg.to_str().unwrap()]);
        assert_eq!(
            code(&out),
            3,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = run(&[
        "run",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

const SWEEP: &str = r#"
[sweep]
delta1 = { min = 0.04, max = 4.0, steps = 100 }
delta2 = { min = 0.04, max = 4.0, steps = 100 }
points = [[0.5, 0.5], [0.2, 3.0]]
etas = [0.74, 0.76]
"#;

#[test]
fn sweep_rows_follow_the_region_rule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sweep.toml", SWEEP);
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "delta1",
            "delta2",
            "region",
            "eta_critical",
            "detected_eta_0.74",
            "detected_eta_0.76"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 100 * 100 + 2);
    for r in &rows {
        let (d1, d2): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let expected = if d1 * d2 >= 1.0 {
            "S"
        } else if d1 + d2 < 2.0 {
            "E"
        } else {
            "E_prime"
        };
        assert_eq!(&r[2], expected, "{d1} {d2}");
        assert_eq!(r[3].is_empty(), expected == "S");
    }
    let a = &rows[rows.len() - 2];
    assert_eq!((&a[0], &a[1], &a[2]), ("0.5", "0.5", "E"));
    assert_eq!(a[3].parse::<f64>().unwrap(), 0.0);
    let b = &rows[rows.len() - 1];
    assert_eq!((&b[0], &b[1], &b[2]), ("0.2", "3", "E_prime"));
    assert!((b[3].parse::<f64>().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!((&b[4], &b[5]), ("false", "true"));
    // separable and entangled cells both occur on either side of each curve
    let count = |name: &str| rows.iter().filter(|r| &r[2] == name).count();
    assert!(count("S") > 0 && count("E") > 0 && count("E_prime") > 0);
}

fn oracle_rows(text: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", text);
    stdout_json(&run(&["oracle-check", "--config", cfg.to_str().unwrap()]))
}

fn row<'a>(block: &'a Value, name: &str) -> &'a Value {
    block["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == name)
        .unwrap()
}

#[test]
fn oracle_check_examples() {
    let tmsv = oracle_rows("[[state]]\nop = \"vacuum\"\nmodes = 2\n[[state]]\nop = \"two_mode_squeeze\"\nmodes = [0, 1]\ns = 0.4\n");
    assert!(row(&tmsv, "e_sympl")["abs_diff"].as_f64().unwrap() < 1e-3);
    assert!(tmsv["warning"].is_null());

    let thermal = oracle_rows("[[state]]\nop = \"thermal\"\noccupations = [3.0]\n");
    assert!((row(&thermal, "purity")["oracle"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-6);

    let vacuum = oracle_rows("[[state]]\nop = \"vacuum\"\nmodes = 2\n");
    for r in vacuum["rows"].as_array().unwrap() {
        assert!(r["abs_diff"].as_f64().unwrap() < 1e-8, "{r}");
    }

    let fid = oracle_rows(
        "[[state]]\nop = \"vacuum\"\nmodes = 1\n[[reference]]\nop = \"vacuum\"\nmodes = 1\n[[reference]]\nop = \"displace\"\nmode = 0\ndq = 2.0\ndp = 0.0\n",
    );
    let f = row(&fid, "fidelity");
    assert!((f["oracle"].as_f64().unwrap() - (-1.0f64).exp()).abs() < 1e-6);
}

#[test]
fn oracle_cutoff_failure_is_a_warning() {
    let block = oracle_rows(
        "[[state]]\nop = \"vacuum\"\nmodes = 1\n[[state]]\nop = \"squeeze\"\nmode = 0\ns = 3.0\n",
    );
    assert!(block["warning"].as_str().unwrap().contains("cutoff"));
    assert!(block["rows"].as_array().unwrap().is_empty());
}

#[test]
fn default_analyses_follow_mode_count() {
    let dir = tempfile::tempdir().unwrap();
    let single = write_config(
        dir.path(),
        "single.toml",
        "[[state]]\nop = \"thermal\"\noccupations = [3.0]\n",
    );
    let doc = stdout_json(&run(&["run", "--config", single.to_str().unwrap()]));
    assert!((doc["exact"]["purity"]["purity"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!(doc["exact"]["entanglement"].is_null());

    let pair = write_config(
        dir.path(),
        "pair.toml",
        "[[state]]\nop = \"vacuum\"\nmodes = 2\n",
    );
    let doc = stdout_json(&run(&["run", "--config", pair.to_str().unwrap()]));
    assert!(doc["exact"]["entanglement"].is_object());
}
