use std::fs;
use std::path::Path;
use std::process::Command;

use tccli::{parse_config, read_table, run_experiment, write_outputs, ExperimentRegistry};

fn run_config(text: &str, dir: &Path) -> tccli::ResultBundle {
    let registry = ExperimentRegistry::builtin();
    let mut cfg = parse_config(text, &registry).unwrap();
    cfg.output_dir = dir.to_path_buf();
    let bundle = run_experiment(&cfg, &registry).unwrap();
    write_outputs(&cfg, &bundle).unwrap();
    bundle
}

const SMALL_SWEEP: &str = r#"
experiment = "sweep"
[system]
n_qubits = 2
fock_cutoff = 4
[schedule]
tau = 40.0
"#;

#[test]
fn parity_check_has_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    run_config("experiment = \"parity-check\"\n[system]\nfock_cutoff = 4\n", dir.path());
    let table = read_table(&dir.path().join("parity-check.csv")).unwrap();
    let norms = &table.column("commutator_norm").unwrap().values;
    assert_eq!(norms.len(), 2);
    assert!(norms[0] <= 1e-10);
    assert!(norms[1] > 0.0);
}

#[test]
fn sweep_columns_and_first_sample() {
    let dir = tempfile::tempdir().unwrap();
    run_config(SMALL_SWEEP, dir.path());
    let table = read_table(&dir.path().join("sweep.csv")).unwrap();
    let names: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["time_ns", "ratio", "jz_scaled", "photons", "p00", "p01", "p10", "p11", "trace_drift"]);
    assert!(table.columns.iter().all(|c| !c.unit.is_empty()));
    assert!((table.column("jz_scaled").unwrap().values[0] + 1.0).abs() <= 0.02);
    let meta = fs::read_to_string(dir.path().join("sweep.meta")).unwrap();
    assert!(meta.contains("tool: tccli") && meta.contains("tau = 40.0"));
}

#[test]
fn written_csv_reparses_to_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = run_config("experiment = \"mean-field\"\n[scan]\nratio_step = 0.1\n", dir.path());
    let back = read_table(&dir.path().join("mean-field.csv")).unwrap();
    for (a, b) in bundle.tables[0].columns.iter().zip(&back.columns) {
        assert_eq!(a.header(), b.header());
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let text = r#"
experiment = "uncertainty"
seed = 11
[system]
n_qubits = 2
fock_cutoff = 6
delta_r = 30.0
[scan]
ratio_start = 0.8
ratio_end = 1.4
ratio_step = 0.2
runs = 4
"#;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_config(text, a.path());
    run_config(text, b.path());
    let read = |d: &Path| fs::read(d.join("uncertainty.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn calibrate_recovers_drive() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = run_config("experiment = \"calibrate\"\n", dir.path());
    let recovered = &bundle.tables[0].column("omega_recovered").unwrap().values;
    assert!((recovered[0] - 4.0).abs() < 0.04);
    assert!((recovered[1] - 4.0).abs() < 0.2);
    assert!(dir.path().join("calibrate_probe.csv").exists());
}

#[test]
fn ground_scan_plot_has_one_curve_per_qubit_count() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
experiment = "ground-scan"
[system]
delta_r = 30.0
[scan]
n_qubits = [2, 4]
ratio_step = 0.25
[output]
emit_plot = true
"#;
    run_config(text, dir.path());
    let table = read_table(&dir.path().join("ground-scan.csv")).unwrap();
    let ns = &table.column("n_qubits").unwrap().values;
    assert!(ns.contains(&2.0) && ns.contains(&4.0));
    let script = fs::read_to_string(dir.path().join("ground-scan_plot.py")).unwrap();
    assert!(script.contains("sorted(set(data[\"n_qubits\"]))"));
}

#[test]
fn binary_writes_files_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, SMALL_SWEEP).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_tccli"))
        .arg(&cfg)
        .args(["--output", out.to_str().unwrap(), "--threads", "1", "--emit-plot"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    for f in ["sweep.csv", "sweep.meta", "sweep_plot.py"] {
        assert!(out.join(f).exists(), "{f}");
    }

    fs::write(&cfg, "experiment = \"sweep\"\n[system]\nlamda = 20.0\n").unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_tccli")).arg(&cfg).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("lamda"));

    fs::write(&cfg, SMALL_SWEEP).unwrap();
    let seeded = Command::new(env!("CARGO_BIN_EXE_tccli")).arg(&cfg).args(["--seed", "3"]).output().unwrap();
    assert!(!seeded.status.success());
    assert!(String::from_utf8_lossy(&seeded.stderr).contains("seed"));
}
