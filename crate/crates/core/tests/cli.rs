//! The `ergodom` binary: exit codes, artifacts and flag overrides.

use std::path::{Path, PathBuf};
use std::process::Command;

use ergodom::set::read_set;
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ergodom")).args(args).output().expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().expect("exit code"), text)
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const Z_SMALL: &str = r#"{"schema": 1, "folner": {"family": "zd_cube", "dim": 1},
    "chain": {"mode": "explicit", "indices": [1, 3]}, "schedule": {"depth": 2}"#;

#[test]
fn dominate_passes_and_emits_exact_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{Z_SMALL}, \"dominate\": {{\"lower_estimate\": true}}}}"));
    let out = dir.path().join("out");
    let (code, text) = run(&["dominate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let doc: Value = serde_json::from_slice(&std::fs::read(out.join("dominance.json")).unwrap()).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        for field in ["min_scaled", "bound", "c_emp"] {
            assert!(r[field]["num"].is_string() && r[field]["den"].is_string(), "{field} is not a string pair");
        }
        assert_eq!(r["verdict"], "pass");
    }
    assert!(doc["lower_estimate"].as_array().unwrap().iter().all(|l| l["holds"] == true));
    let csv = std::fs::read_to_string(out.join("dominance.csv")).unwrap();
    assert!(csv.starts_with("n,folner_size,envelope_size,N,min_density,bound,c_emp,verdict,taint\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn unit_cesaro_length_fails_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{Z_SMALL}, \"dominate\": {{\"cesaro_length\": 1}}}}"));
    let (code, text) = run(&["dominate", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code, 2, "{text}");
    assert!(text.contains("fail"));
}

#[test]
fn size_cap_yields_budget_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{Z_SMALL}}}"));
    let out = dir.path().join("o");
    // E_2 of this chain has 11 elements; a cap of 9 stops at level 2
    let (code, text) = run(&["dominate", "--config", &cfg, "--out", out.to_str().unwrap(), "--cap", "9"]);
    assert_eq!(code, 3, "{text}");
    let doc: Value = serde_json::from_slice(&std::fs::read(out.join("dominance.json")).unwrap()).unwrap();
    assert_eq!(doc["reports"].as_array().unwrap().len(), 1);
    assert_eq!(doc["chain_status"]["certified"], false);
    assert_eq!(doc["chain_status"]["budget_level"], 2);
    // a cap below |F_1| leaves nothing to report
    let (code, _) = run(&["dominate", "--config", &cfg, "--out", out.to_str().unwrap(), "--cap", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"schema": 7, "folner": {"family": "lamplighter"}}"#);
    assert_eq!(run(&["census", "--config", &cfg]).0, 1);
    assert_eq!(run(&["census", "--config", "/nonexistent.json"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn census_matches_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"schema": 1, "folner": {"family": "lamplighter"}, "census": {"max_n": 5}}"#);
    let out = dir.path().join("o");
    let (code, text) = run(&["census", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(out.join("census.csv")).unwrap();
    assert!(csv.starts_with("n,set,size,formula,match\n"));
    assert!(csv.contains("3,two_sided,184,184,true"));
    assert!(!csv.contains("false"));
}

#[test]
fn chain_writes_manifest_and_listings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{Z_SMALL}}}"));
    let out = dir.path().join("o");
    let (code, text) = run(&["chain", "--config", &cfg, "--out", out.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(code, 0, "{text}");
    let manifest: Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["levels"].as_array().unwrap().len(), 1);
    let f1 = read_set(std::io::BufReader::new(std::fs::File::open(out.join("sets/level1_folner.txt")).unwrap())).unwrap();
    assert_eq!(f1, ergodom::FiniteSubset::interval(-1, 1));
    assert!(out.join("omega.csv").exists());
}

#[test]
fn simulate_and_sweep_configs_pass() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, name, file) in [
        ("simulate", "z4_matrix_simulate.json", "kadison.csv"),
        ("simulate", "z_simulate.json", "convergence.csv"),
        ("sweep", "z_sweep.json", "sweep.csv"),
    ] {
        let out = dir.path().join(name);
        let cfg = configs().join(name);
        let (code, text) = run(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}: {text}");
        assert!(out.join(file).exists(), "{name}: no {file}");
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("z4_matrix_simulate.json");
    let runs: Vec<Vec<u8>> = ["1", "1", "2"]
        .iter()
        .map(|seed| {
            let out = dir.path().join(format!("s{seed}_{}", rand_suffix(dir.path())));
            let (code, _) =
                run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", seed]);
            assert_eq!(code, 0);
            std::fs::read(out.join("kadison.csv")).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_ne!(runs[0], runs[2]);
}

fn rand_suffix(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().count()
}
