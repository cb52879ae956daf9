//! Built-in experiments.

use rayon::prelude::*;
use tcsim::calibration::{
    calibrate_drive, infer_alpha, rabi_probe_signal, recover_drive_strength, simulate_resonant_drive,
};
use tcsim::dynamics::{evolve_sweep, evolve_sweep_with, ratio_to_detuning, SweepOptions};
use tcsim::ground_state::{ground_state_scan, mean_field_scan, ScanPoint};
use tcsim::measurement::{monte_carlo_ground_scan, monte_carlo_uncertainty, ProbabilityTable};
use tcsim::model::{
    build_driven_tc_hamiltonian, build_operator_set, build_undriven_tc_hamiltonian, parity_commutator_norm,
    SystemParams,
};

use crate::bundle::Table;
use crate::config::{ExperimentConfig, UncertaintyMode};
use crate::registry::Experiment;

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn scan_table(label: &str, points: &[(usize, ScanPoint)]) -> Table {
    let col = |f: &dyn Fn(&ScanPoint) -> f64| points.iter().map(|(_, p)| f(p)).collect::<Vec<_>>();
    Table::new(label)
        .with("n_qubits", "1", points.iter().map(|(n, _)| *n as f64).collect())
        .with("ratio", "1", col(&|p| p.ratio))
        .with("jz_scaled", "1", col(&|p| p.jz_scaled))
        .with("jx_scaled", "1", col(&|p| p.jx_scaled))
        .with("photons_scaled", "1", col(&|p| p.photons_scaled))
        .with("ground_energy", "rad/ns", col(&|p| p.ground_energy))
        .with("fock_cutoff", "1", col(&|p| p.fock_cutoff as f64))
        .with("degenerate", "bool", col(&|p| flag(p.degenerate)))
}

pub struct GroundScan;

impl Experiment for GroundScan {
    fn name(&self) -> &'static str {
        "ground-scan"
    }

    fn description(&self) -> &'static str {
        "finite-N ground-state moments over the ratio grid, one block per qubit count"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let grid = cfg.grid();
        let mut points = Vec::new();
        for n in cfg.qubit_counts() {
            let params = SystemParams { n_qubits: n, ..cfg.system.clone() };
            points.extend(ground_state_scan(&params, &grid)?.into_iter().map(|p| (n, p)));
        }
        Ok(vec![scan_table("ground", &points)])
    }
}

pub struct MeanField;

impl Experiment for MeanField {
    fn name(&self) -> &'static str {
        "mean-field"
    }

    fn description(&self) -> &'static str {
        "large-N limit over the ratio grid; energies per qubit"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let points = mean_field_scan(&cfg.grid(), cfg.system.omega_drive, &cfg.system)?;
        let tagged: Vec<_> = points.into_iter().map(|p| (0, p)).collect();
        let mut table = scan_table("mean_field", &tagged);
        table.columns.retain(|c| c.name != "n_qubits" && c.name != "fock_cutoff");
        Ok(vec![table])
    }
}

pub struct Sweep;

impl Experiment for Sweep {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn description(&self) -> &'static str {
        "swept Lindblad evolution from the all-ground vacuum"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let rec = evolve_sweep(&cfg.system, &cfg.schedule)?;
        let mut table = Table::new("trajectory")
            .with("time_ns", "ns", rec.times.clone())
            .with("ratio", "1", rec.ratios.clone())
            .with("jz_scaled", "1", rec.jz_scaled.clone())
            .with("photons", "1", rec.photons.clone());
        let n = rec.n_qubits;
        for idx in 0..(1usize << n) {
            table = table.with(
                &ProbabilityTable::label(n, idx),
                "1",
                rec.probability_tables.iter().map(|t| t.get(idx)).collect(),
            );
        }
        Ok(vec![table.with("trace_drift", "1", rec.trace_drift)])
    }
}

pub struct Spectrum;

impl Experiment for Spectrum {
    fn name(&self) -> &'static str {
        "spectrum"
    }

    fn description(&self) -> &'static str {
        "sweep with the lowest instantaneous levels tracked through the window"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let k = cfg.scan.track_levels.max(1);
        let rec = evolve_sweep_with(&cfg.system, &cfg.schedule, &SweepOptions { track_levels: k, ..Default::default() })?;
        let track = rec.eigen_track.unwrap_or_default();
        let k = track.first().map_or(0, |s| s.energies_mhz.len());
        let mut table = Table::new("spectrum")
            .with("time_ns", "ns", rec.times)
            .with("ratio", "1", rec.ratios)
            .with("jz_scaled", "1", rec.jz_scaled);
        for level in 0..k {
            table = table.with(&format!("energy_{level}"), "MHz", track.iter().map(|s| s.energies_mhz[level]).collect());
        }
        for level in 0..k {
            table = table.with(&format!("population_{level}"), "1", track.iter().map(|s| s.populations[level]).collect());
        }
        Ok(vec![table.with("ambiguous", "bool", track.iter().map(|s| flag(s.ambiguous)).collect())])
    }
}

pub struct Uncertainty;

impl Experiment for Uncertainty {
    fn name(&self) -> &'static str {
        "uncertainty"
    }

    fn description(&self) -> &'static str {
        "Monte-Carlo spread of jz_scaled under random per-qubit frequency offsets"
    }

    fn needs_seed(&self) -> bool {
        true
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let mc = cfg.monte_carlo();
        match cfg.scan.mode {
            UncertaintyMode::Ground => {
                let mut rows = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
                for n in cfg.qubit_counts() {
                    let params = SystemParams { n_qubits: n, ..cfg.system.clone() };
                    let s = monte_carlo_ground_scan(&params, &cfg.grid(), &mc)?;
                    rows.0.extend(std::iter::repeat_n(n as f64, s.ratios.len()));
                    rows.1.extend(s.ratios);
                    rows.2.extend(s.mean);
                    rows.3.extend(s.sd);
                }
                Ok(vec![Table::new("uncertainty")
                    .with("n_qubits", "1", rows.0)
                    .with("ratio", "1", rows.1)
                    .with("jz_mean", "1", rows.2)
                    .with("jz_sd", "1", rows.3)])
            }
            UncertaintyMode::Sweep => {
                let s = monte_carlo_uncertainty(&cfg.system, &cfg.schedule, &mc)?;
                Ok(vec![Table::new("uncertainty")
                    .with("time_ns", "ns", s.times)
                    .with("ratio", "1", s.ratios)
                    .with("jz_mean", "1", s.mean)
                    .with("jz_sd", "1", s.sd)])
            }
        }
    }
}

pub struct Calibrate;

impl Experiment for Calibrate {
    fn name(&self) -> &'static str {
        "calibrate"
    }

    fn description(&self) -> &'static str {
        "resonant drive of the empty resonator, amplitude inference and drive-strength recovery"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let c = &cfg.calibration;
        let omega = cfg.system.omega_drive;
        let cases = [0.0, cfg.system.kappa1];
        let recovered: Vec<f64> =
            cases.par_iter().map(|&k| calibrate_drive(omega, c.drive_time, k, c.fock_cutoff)).collect::<tcsim::Result<_>>()?;
        let pops = simulate_resonant_drive(omega, c.drive_time, cfg.system.kappa1, c.fock_cutoff)?;
        let alpha = infer_alpha(&pops)?;
        let steps = (c.probe_duration / c.probe_step).round() as usize;
        let times: Vec<f64> = (0..=steps).map(|i| i as f64 * c.probe_step).collect();
        let signal = rabi_probe_signal(&pops, c.probe_coupling, &times)?;
        let summary = Table::new("summary")
            .with("omega_set", "MHz", vec![omega; 2])
            .with("kappa1", "MHz", cases.to_vec())
            .with("omega_recovered", "MHz", recovered)
            .with("drive_time", "ns", vec![c.drive_time; 2]);
        let populations = Table::new("populations")
            .with("n", "1", (0..pops.pn.len()).map(|n| n as f64).collect())
            .with("population", "1", pops.pn.clone());
        let probe = Table::new("probe")
            .with("time_ns", "ns", times)
            .with("excited_probability", "1", signal)
            .with("alpha", "1", vec![alpha; steps + 1])
            .with("omega_from_alpha", "MHz", vec![recover_drive_strength(alpha, 1.0, c.drive_time)?; steps + 1]);
        Ok(vec![summary, populations, probe])
    }
}

pub struct ParityCheck;

impl Experiment for ParityCheck {
    fn name(&self) -> &'static str {
        "parity-check"
    }

    fn description(&self) -> &'static str {
        "Frobenius norms of [H, P]: undriven lab-frame model and the driven rotating-frame model"
    }

    fn run(&self, cfg: &ExperimentConfig) -> tcsim::Result<Vec<Table>> {
        let p = &cfg.system;
        let parity = build_operator_set(p)?.parity;
        let undriven = build_undriven_tc_hamiltonian(cfg.parity.omega_q, cfg.parity.omega_r, p.lambda, p.n_qubits, p.fock_cutoff)?;
        let dq = ratio_to_detuning(cfg.parity.ratio, p.lambda, p.effective_delta_r())?;
        let driven = build_driven_tc_hamiltonian(p, dq)?;
        Ok(vec![Table::new("parity")
            .with("case", "1", vec![0.0, 1.0])
            .with("omega_drive", "MHz", vec![0.0, p.omega_drive])
            .with(
                "commutator_norm",
                "rad/ns",
                vec![parity_commutator_norm(&undriven, &parity)?, parity_commutator_norm(&driven, &parity)?],
            )])
    }
}
