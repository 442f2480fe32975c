use std::fs;
use std::process::Command;

use irs_af::experiments::csv_io::{read_csv, COLUMNS};
use irs_af::experiments::DEFAULT_ELEMENTS;
use irs_af::quantizer::QuantizerSpec;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_irs-af"));
    cmd.env_remove("IRS_AF_CONFIG");
    cmd
}

#[test]
fn fig2_writes_csv_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let status = bin().args(["fig2", "--out"]).arg(&out).status().unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "# overrides: none"));
    assert!(text.lines().any(|l| l == COLUMNS.join(",")));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 4 * DEFAULT_ELEMENTS.len());
    assert!(rows.iter().all(|r| r.n == r.m && r.mc_loss_db.is_none()));

    // emitted file re-serializes byte for byte
    let mut again = Vec::new();
    let meta: Vec<String> = text
        .lines()
        .filter_map(|l| l.strip_prefix("# ").map(String::from))
        .collect();
    irs_af::experiments::csv_io::write_csv(&mut again, &meta, &rows).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
}

#[test]
fn sweep_beyond_figure_bits() {
    let out = bin()
        .args(["sweep", "--k", "9", "--n", "16,64"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# overrides: k=9 n=16,64"));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.k1 == QuantizerSpec::Bits(9) && r.loss_pl_db >= 0.0));
}

#[test]
fn flag_overrides_are_recorded() {
    let out = bin()
        .args(["fig4", "--k", "2", "--trials", "20", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# overrides: k=2 seed=5 trials=20"), "{text}");
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .all(|r| r.trials == Some(20) && r.seed == Some(5)));
}

#[test]
fn config_file_is_applied_and_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "pr_dbm = 30.0\n").unwrap();
    let out = bin()
        .args(["sweep", "--k", "2", "--n", "16", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pr_dbm=30"), "{text}");
    assert!(text.contains("overrides: config="));

    // same file through the environment variable
    let env_out = bin()
        .args(["sweep", "--k", "2", "--n", "16"])
        .env("IRS_AF_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(env_out.status.success());
    let a = read_csv(text.as_bytes()).unwrap();
    let b = read_csv(env_out.stdout.as_slice()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bad_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "ps_dbm = 30.0\nbogus_key = 1\n").unwrap();
    let out = bin().args(["fig2", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bogus_key"), "{err}");

    fs::write(&cfg, "n_elements = 0\n").unwrap();
    let out = bin().args(["fig2", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("n_elements"));
}

#[test]
fn missing_config_and_unknown_flag_fail() {
    let out = bin()
        .args(["fig2", "--config", "/nonexistent/x.toml"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("/nonexistent/x.toml"));

    let out = bin().args(["fig2", "--bogus"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("--bogus"));
}

#[test]
fn validate_small_run_is_deterministic() {
    let args = [
        "validate", "--n", "64", "--k", "3", "--trials", "300", "--seed", "9",
    ];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let text = String::from_utf8(a.stderr).unwrap();
    assert!(text.contains("loss_db") && text.contains("mean cos err"));
}

#[test]
fn shipped_defaults_file_matches_builtin_defaults() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/defaults.toml");
    let parsed = irs_af::SystemParams::from_file(std::path::Path::new(path)).unwrap();
    assert_eq!(parsed, irs_af::SystemParams::default());
}
