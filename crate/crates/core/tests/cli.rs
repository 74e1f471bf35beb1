use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_schottky-lab");

fn lab(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SCHOTTKY_LAB_CONFIG")
        .env_remove("SCHOTTKY_LAB_SEED")
        .env_remove("SCHOTTKY_LAB_DEPTH")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_fixture_a() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[scheme]\nfixture = \"a\"\n");
    let out = dir.path().join("out");
    let result = lab(&["validate", "--config", &config], &out);
    assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["rank"], 2);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn corrupted_scheme_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"
depth = 4
[scheme]
[[scheme.pairings]]
source = [-3.0, 0.0]
target = [3.0, 0.0]
radius = 0.6
[[scheme.pairings]]
source = [-2.8, 0.0]
target = [1.0, 0.0]
radius = 0.35
"#,
    );
    let result = lab(&["dimension", "--config", &config], &dir.path().join("out"));
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("error"));
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "depth = 4\nbogus = true\n");
    assert_eq!(lab(&["validate", "--config", &config], &dir.path().join("out")).status.code(), Some(2));
}

#[test]
fn gap_sweep_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let result = lab(&["gap-sweep", "--depth", "5", "--seed", "11", "--threads", "2"], out);
        assert_eq!(result.status.code(), Some(0));
    }
    for name in ["gap.csv", "gap.json", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let csv = std::fs::read_to_string(a.join("gap.csv")).unwrap();
    assert!(csv.starts_with("b,k,eta,fit_residual,flag\r\n"));
    assert_eq!(csv.lines().count(), 1 + 35);
}

#[test]
fn environment_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let result = Command::new(BIN)
        .arg("pressure-curve")
        .env("SCHOTTKY_LAB_OUT", &out)
        .env("SCHOTTKY_LAB_DEPTH", "3")
        .env("SCHOTTKY_LAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["depth"], 3);
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["artifacts"][0]["name"], "pressure.csv");
}

#[test]
fn geodesics_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "depth = 5\n[geodesics]\nt_values = [10.0, 15.0]\n");
    let out = dir.path().join("out");
    assert_eq!(lab(&["geodesics", "--config", &config], &out).status.code(), Some(0));
    let table = std::fs::read_to_string(out.join("equidistribution.csv")).unwrap();
    assert!(table.starts_with("T,count,S1,S2,S3,li_ratio\r\n"));
    let geodesics = std::fs::read_to_string(out.join("geodesics.csv")).unwrap();
    assert!(geodesics.starts_with("class_id,length,angle,word\r\n"));
}
