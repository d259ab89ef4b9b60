//! End-to-end checks of the command-line surface: exact headline outputs,
//! reproducible JSON, seeded sweeps, CSV shape, and error JSON.

use std::process::Command;

fn zeroscope() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zeroscope"))
}

fn run_ok(args: &[&str]) -> String {
    let out = zeroscope().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn exponents_solve_headline() {
    let out = run_ok(&["exponents", "solve"]);
    assert_eq!(out.trim(), "sup_varpi = 50/1093 (binding: delta-interval)");
}

#[test]
fn classify_headline() {
    let out = run_ok(&[
        "decomp", "classify", "--t", "1.0", "--lambda", "0.05", "--sigma", "0.1", "--delta",
        "0.01",
    ]);
    assert_eq!(out.trim(), "type=d1 witness=1");
    let out = run_ok(&[
        "decomp", "classify", "--t", "0.2,0.2,0.2,0.2,0.2", "--lambda", "0.01", "--sigma",
        "0.14", "--delta", "0.05",
    ]);
    assert_eq!(out.trim(), "type=II witness=1");
}

#[test]
fn skappa_difference_is_negligible() {
    let out = run_ok(&["skappa", "--Q", "20", "--nu", "1.0"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let diff = doc["result"]["difference"].as_f64().unwrap().abs();
    let direct = doc["result"]["direct"].as_f64().unwrap().abs();
    assert!(diff < 1e-9 * direct.max(1.0), "difference {diff}");
}

#[test]
fn json_reruns_are_identical_modulo_timestamp() {
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = run_ok(&["apsums", "kloosterman", "--m", "1", "--n", "2", "--c", "97"]);
    let b = run_ok(&["apsums", "kloosterman", "--m", "1", "--n", "2", "--c", "97"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn seeded_fuzz_is_replayable() {
    let a = run_ok(&["decomp", "fuzz", "--rounds", "2000", "--seed", "7"]);
    let b = run_ok(&["decomp", "fuzz", "--rounds", "2000", "--seed", "7"]);
    let get = |s: &str, key: &str| -> u64 {
        let doc: serde_json::Value = serde_json::from_str(s).unwrap();
        doc["result"][key].as_u64().unwrap()
    };
    for key in ["d1", "d2", "type_ii", "failures"] {
        assert_eq!(get(&a, key), get(&b, key), "field {key}");
    }
    assert_eq!(get(&a, "failures"), 0);
}

#[test]
fn zeros_csv_shape() {
    let out = run_ok(&["zeros", "--q", "4", "--T", "8", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "q,char_id,gamma,T,matched");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2, "χ mod 4 has a ± ordinate pair below 8: {rows:?}");
    for r in rows {
        let fields: Vec<&str> = r.split(',').collect();
        assert_eq!(fields[0], "4");
        assert_eq!(fields[1], "4:1");
        assert_eq!(fields[4], "true");
        let g: f64 = fields[2].parse().unwrap();
        assert!((g.abs() - 6.0209).abs() < 1e-3);
    }
}

#[test]
fn gnuplot_format_has_hash_header() {
    let out = run_ok(&[
        "apsums", "delta", "--sweep", "6", "--X", "400", "--R", "1", "--format", "gnuplot",
    ]);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# "));
    assert_eq!(lines.filter(|l| !l.is_empty()).count(), 6);
}

#[test]
fn error_json_and_nonzero_exit() {
    let out = zeroscope()
        .args(["apsums", "kloosterman", "--m", "1", "--n", "1", "--c", "0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let doc: serde_json::Value = serde_json::from_str(stderr.trim()).expect("error JSON");
    assert_eq!(doc["error"]["kind"], "domain");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join("zeroscope-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "seed=7\nformat=json\n").unwrap();
    let a = run_ok(&[
        "decomp",
        "fuzz",
        "--rounds",
        "500",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["result"]["seed"].as_u64().unwrap(), 7);
}

#[test]
fn density_independent_of_thread_count() {
    let a = run_ok(&["density", "--Q", "12", "--nu", "1.0", "--T", "15", "--threads", "1"]);
    let b = run_ok(&["density", "--Q", "12", "--nu", "1.0", "--T", "15", "--threads", "2"]);
    let da: serde_json::Value = serde_json::from_str(&a).unwrap();
    let db: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_eq!(da["result"]["lhs"], db["result"]["lhs"]);
    assert_eq!(da["result"]["rhs"], db["result"]["rhs"]);
    assert_eq!(da["result"]["ratio"], db["result"]["ratio"]);
}

#[test]
fn nonvanishing_bound_limit_output() {
    let out = run_ok(&["exponents", "nonvanishing-bound"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["bound"], "1143/2236");
    let note = doc["result"]["note"].as_str().unwrap();
    assert!(note.contains("2235") && note.contains("2236"));
}

#[test]
fn feasible_intervals_close_at_the_supremum() {
    let out = run_ok(&["exponents", "feasible", "--varpi", "50/1093"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["feasible"], false);
    assert_eq!(doc["result"]["intervals"]["delta"]["nonempty"], false);
    assert_eq!(doc["result"]["intervals"]["lambda"]["nonempty"], true);
    let out = run_ok(&["exponents", "feasible", "--varpi", "1/25"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["feasible"], true);
}
