//! End-to-end tests of the binary: documented examples, exit codes,
//! output determinism and the dump format.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ia-dof"));
    cmd.args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON document")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

#[test]
fn dof_bracketed_example() {
    let out = run(&["dof", "--G", "3", "--K", "1", "--M", "5", "--N", "7"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["d_quantity"]["exact"], "3/1");
    assert_eq!(doc["region"]["label"], "II-B");
    assert_eq!(doc["region"]["index"], 3);
    assert_eq!(doc["achievable_by"], "linear");
}

#[test]
fn dof_region_one_example() {
    let out = run(&["dof", "--G", "3", "--K", "2", "--M", "17", "--N", "5"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["region"]["label"], "I");
    assert_eq!(doc["d_quantity"], Value::Null);
    assert_eq!(doc["d_upper"]["exact"], "85/27");
    assert_eq!(doc["achievable_by"], "asymptotic-only");
}

#[test]
fn usage_errors_exit_two_with_json() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["dof", "--G", "0", "--K", "1", "--M", "1", "--N", "1"],
        vec!["feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "x/y"],
        vec!["feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "0"],
        vec!["sweep", "--G", "3", "--K", "2", "--M", "9..3", "--N", "1..2", "--mode", "bounds"],
        vec!["sweep", "--G", "3", "--K", "2", "--M", "1..2", "--N", "1..2", "--mode", "feasibility"],
        vec!["dof", "--G", "3", "--K", "1", "--M", "5"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {args:?}");
        let doc = stderr_json(&out);
        assert_eq!(doc["error"]["kind"], "usage", "args {args:?}");
        assert!(doc["error"]["message"].is_string());
    }
}

#[test]
fn feasible_examples() {
    let out = run(&["feasible", "--G", "3", "--K", "1", "--M", "1", "--N", "7", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["linear"], "infeasible");
    assert_eq!(doc["proper_holds"], true);
    assert!(doc["binding_pair"].is_object());

    let out = run(&["feasible", "--G", "3", "--K", "2", "--M", "21", "--N", "21", "--d", "7"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["linear"], "infeasible");
    assert_eq!(doc["asymptotic"], "feasible");

    let out = run(&["feasible", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "3"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["linear"], "feasible");
    assert_eq!(doc["binding_pair"], Value::Null);
}

#[test]
fn chain_reports_dims_and_genie_bound() {
    let out = run(&["chain", "--G", "3", "--K", "1", "--M", "5", "--N", "7"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["side"], "B");
    assert_eq!(doc["length"], 3);
    assert_eq!(doc["genie_bound"]["exact"], "3/1");
    assert_eq!(doc["dims"].as_array().unwrap().len(), 5);

    let out = run(&["chain", "--G", "3", "--K", "2", "--M", "1", "--N", "1"]);
    assert_eq!(code(&out), 3);
    assert_eq!(stderr_json(&out)["error"]["kind"], "refused");

    let out = run(&["chain", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--d", "4"]);
    assert_eq!(code(&out), 3);
    let doc = stderr_json(&out);
    assert_eq!(doc["error"]["kind"], "refused");
    assert!(doc["error"]["broken"].is_string());
}

#[test]
fn sequences_tables() {
    let out = run(&["sequences", "--G", "3", "--K", "2", "--count", "3"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["has_rational_limit"], false);
    let c_a: Vec<&str> =
        doc["side_a"].as_array().unwrap().iter().map(|e| e["c"]["exact"].as_str().unwrap()).collect();
    assert_eq!(c_a, ["inf", "4/1", "7/2", "24/7"]);
    let c_b: Vec<&str> =
        doc["side_b"].as_array().unwrap().iter().map(|e| e["c"]["exact"].as_str().unwrap()).collect();
    assert_eq!(c_b, ["0/1", "1/2", "4/7", "7/12"]);

    let out = run(&["sequences", "--G", "3", "--K", "1"]);
    assert_eq!(stdout_json(&out)["has_rational_limit"], true);
}

#[test]
fn synth_passes_and_is_deterministic() {
    let args = ["synth", "--G", "3", "--K", "1", "--M", "5", "--N", "7", "--seed", "7", "--json"];
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["d"], 3);
    assert_eq!(doc["verification"]["pass"], true);
    assert!(doc["verification"]["zf_residual"].as_f64().unwrap() <= 1e-8);
    let again = run(&args);
    assert_eq!(out.stdout, again.stdout, "identical invocations must be byte-identical");
}

#[test]
fn synth_auto_extends() {
    let out = run(&["synth", "--G", "3", "--K", "2", "--M", "8", "--N", "2"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["extension"], 3);
    assert_eq!(doc["extended_config"]["M"], 24);
    assert_eq!(doc["extended_config"]["N"], 6);
    assert_eq!(doc["d"], 4);
    assert_eq!(doc["verification"]["pass"], true);
}

#[test]
fn synth_refuses_region_one() {
    let out = run(&["synth", "--G", "3", "--K", "2", "--M", "17", "--N", "5"]);
    assert_eq!(code(&out), 3);
    let doc = stderr_json(&out);
    assert_eq!(doc["error"]["kind"], "infeasible");
    assert_eq!(doc["error"]["report"]["region"]["label"], "I");
}

#[test]
fn synth_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().to_str().unwrap();
    let out = run(&[
        "synth", "--G", "2", "--K", "1", "--M", "2", "--N", "2", "--seed", "5", "--dump", dump,
    ]);
    assert_eq!(code(&out), 0);
    let names = [
        "channel_c0_u0_b0.txt",
        "channel_c1_u0_b1.txt",
        "precoder_b0.txt",
        "precoder_b1.txt",
        "filter_c0_u0.txt",
        "filter_c1_u0.txt",
    ];
    for name in names {
        let path = dir.path().join(name);
        let mut reader = std::io::BufReader::new(std::fs::File::open(&path).unwrap());
        let a = ia_dof::linalg::read_matrix(&mut reader).unwrap();
        assert!(a.nrows() >= 1 && a.ncols() >= 1, "{name} parses to a nonempty matrix");
    }
}

#[test]
fn sweep_bounds_grid_shape() {
    let out = run(&["sweep", "--G", "3", "--K", "2", "--M", "1..30", "--N", "1..30", "--mode", "bounds"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 901);
    assert!(lines[0].starts_with("M,N,region,"));
    assert!(lines[1].starts_with("1,1,"));
    assert!(lines[2].starts_with("1,2,"));
    assert!(lines[31].starts_with("2,1,"), "rows are M-major");
}

#[test]
fn sweep_json_rows_and_thread_cap_determinism() {
    let args =
        ["sweep", "--G", "3", "--K", "2", "--M", "1..12", "--N", "1..12", "--mode", "bounds", "--format", "json"];
    let base = run(&args);
    assert_eq!(code(&base), 0);
    let text = String::from_utf8(base.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 144);
    for line in text.lines() {
        let row: Value = serde_json::from_str(line).expect("each row is JSON");
        assert!(row["M"].is_u64());
    }
    let capped = run_with_env(&args, &[("IA_DOF_THREADS", "1")]);
    assert_eq!(base.stdout, capped.stdout, "thread cap must not change output bytes");

    let bad = run_with_env(&args, &[("IA_DOF_THREADS", "zero")]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn sweep_feasibility_scan_line_bands() {
    // Along a fixed-N scan line the verdict pattern is a band structure:
    // at most three contiguous runs.
    let out = run(&[
        "sweep", "--G", "3", "--K", "2", "--M", "1..40", "--N", "12", "--mode", "feasibility",
        "--d", "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let verdicts: Vec<String> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(verdicts.len(), 40);
    let mut runs = BTreeMap::new();
    let mut run_count = 0;
    for window in verdicts.windows(2) {
        if window[0] != window[1] {
            run_count += 1;
        }
        *runs.entry(window[0].clone()).or_insert(0) += 1;
    }
    assert!(run_count <= 2, "expected at most 3 bands, saw breaks {run_count}");
}

#[test]
fn compact_flag_gives_single_line() {
    let out = run(&["dof", "--G", "2", "--K", "1", "--M", "3", "--N", "3", "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1);
    let pretty = run(&["dof", "--G", "2", "--K", "1", "--M", "3", "--N", "3"]);
    let text = String::from_utf8(pretty.stdout).unwrap();
    assert!(text.lines().count() > 1);
}

#[test]
fn help_documents_csv_columns() {
    let out = run(&["sweep", "--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("d_decomposition_approx"));
    assert!(text.contains("binding_side"));
    assert!(Path::new(env!("CARGO_BIN_EXE_ia-dof")).exists());
}
