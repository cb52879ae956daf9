//! Experiment configuration documents (TOML). Every section is optional and
//! falls back to the device defaults; unknown keys are rejected.

use std::path::PathBuf;

use serde::Deserialize;
use tcsim::dynamics::SweepSchedule;
use tcsim::measurement::{MonteCarloConfig, OffsetDistribution};
use tcsim::model::SystemParams;

use crate::error::{CliError, CliResult};
use crate::registry::ExperimentRegistry;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    experiment: String,
    seed: Option<u64>,
    #[serde(default)]
    system: SystemSection,
    #[serde(default)]
    schedule: ScheduleSection,
    #[serde(default)]
    scan: ScanSpec,
    #[serde(default)]
    calibration: CalibrationSpec,
    #[serde(default)]
    parity: ParitySpec,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SystemSection {
    n_qubits: usize,
    fock_cutoff: usize,
    lambda: f64,
    delta_r: f64,
    omega_drive: f64,
    omega_qubit_drive: Vec<f64>,
    a2_shift: f64,
    kappa1: f64,
    kappa2: f64,
    gamma1: f64,
    gamma2: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        let p = SystemParams::default();
        Self {
            n_qubits: p.n_qubits,
            fock_cutoff: p.fock_cutoff,
            lambda: p.lambda,
            delta_r: p.delta_r,
            omega_drive: p.omega_drive,
            omega_qubit_drive: p.omega_qubit_drive,
            a2_shift: p.a2_shift,
            kappa1: p.kappa1,
            kappa2: p.kappa2,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
        }
    }
}

impl From<SystemSection> for SystemParams {
    fn from(s: SystemSection) -> Self {
        Self {
            n_qubits: s.n_qubits,
            fock_cutoff: s.fock_cutoff,
            lambda: s.lambda,
            delta_r: s.delta_r,
            omega_drive: s.omega_drive,
            omega_qubit_drive: s.omega_qubit_drive,
            a2_shift: s.a2_shift,
            kappa1: s.kappa1,
            kappa2: s.kappa2,
            gamma1: s.gamma1,
            gamma2: s.gamma2,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScheduleSection {
    ratio_start: f64,
    ratio_end: f64,
    tau: f64,
    drive_on: bool,
    dt: f64,
    sample_stride: usize,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        let s = SweepSchedule::default();
        Self {
            ratio_start: s.ratio_start,
            ratio_end: s.ratio_end,
            tau: s.tau,
            drive_on: s.drive_on,
            dt: s.dt,
            sample_stride: s.sample_stride,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UncertaintyMode {
    #[default]
    Ground,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    #[default]
    Uniform,
    Gaussian,
}

/// Ratio grids and per-experiment knobs.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub ratio_start: f64,
    pub ratio_end: f64,
    pub ratio_step: f64,
    /// Qubit counts for ground-state scans; empty means `system.n_qubits`.
    pub n_qubits: Vec<usize>,
    /// Levels followed by the spectrum experiment.
    pub track_levels: usize,
    /// Offset spread (MHz) for uncertainty runs.
    pub sigma: f64,
    pub runs: usize,
    pub distribution: Distribution,
    pub mode: UncertaintyMode,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            ratio_start: 0.5,
            ratio_end: 2.5,
            ratio_step: 0.05,
            n_qubits: Vec::new(),
            track_levels: 3,
            sigma: 1.0,
            runs: 50,
            distribution: Distribution::Uniform,
            mode: UncertaintyMode::Ground,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSpec {
    /// Resonant drive duration (ns).
    pub drive_time: f64,
    /// Resonator cutoff of the single-mode simulation.
    pub fock_cutoff: usize,
    /// Qubit-resonator coupling of the vacuum-Rabi probe (MHz).
    pub probe_coupling: f64,
    /// Probe trace length (ns) and sample spacing (ns).
    pub probe_duration: f64,
    pub probe_step: f64,
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        Self { drive_time: 50.0, fock_cutoff: 30, probe_coupling: 15.0, probe_duration: 200.0, probe_step: 0.5 }
    }
}

/// Lab-frame frequencies (MHz) for the undriven parity reference.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParitySpec {
    pub omega_q: f64,
    pub omega_r: f64,
    /// Ratio at which the rotating-frame Hamiltonian is evaluated.
    pub ratio: f64,
}

impl Default for ParitySpec {
    fn default() -> Self {
        Self { omega_q: 6200.0, omega_r: 6200.0, ratio: 1.2 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputSection {
    dir: PathBuf,
    emit_plot: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("results"), emit_plot: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub system: SystemParams,
    pub schedule: SweepSchedule,
    pub scan: ScanSpec,
    pub calibration: CalibrationSpec,
    pub parity: ParitySpec,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub emit_plot: bool,
    /// The document as read, echoed into the run metadata.
    pub source: String,
}

impl ExperimentConfig {
    pub fn grid(&self) -> Vec<f64> {
        tcsim::ground_state::ratio_grid(self.scan.ratio_start, self.scan.ratio_end, self.scan.ratio_step)
    }

    pub fn qubit_counts(&self) -> Vec<usize> {
        if self.scan.n_qubits.is_empty() {
            vec![self.system.n_qubits]
        } else {
            self.scan.n_qubits.clone()
        }
    }

    pub fn monte_carlo(&self) -> MonteCarloConfig {
        MonteCarloConfig {
            sigma_mhz: self.scan.sigma,
            n_runs: self.scan.runs,
            seed: self.seed.unwrap_or_default(),
            distribution: match self.scan.distribution {
                Distribution::Uniform => OffsetDistribution::Uniform,
                Distribution::Gaussian => OffsetDistribution::Gaussian,
            },
        }
    }

    /// Checks that depend on the chosen experiment; run after command-line
    /// overrides are applied.
    pub fn validate(&self, registry: &ExperimentRegistry) -> CliResult<()> {
        let experiment = registry.lookup(&self.experiment)?;
        match (experiment.needs_seed(), self.seed) {
            (true, None) => {
                return Err(CliError::Seed(format!("experiment `{}` requires a seed", self.experiment)));
            }
            (false, Some(_)) => {
                return Err(CliError::Seed(format!("experiment `{}` is deterministic; remove the seed", self.experiment)));
            }
            _ => {}
        }
        let invalid = |path: &str, e: tcsim::Error| CliError::Config { path: path.into(), message: e.to_string() };
        self.system.validate().map_err(|e| invalid("system", e))?;
        self.schedule.validate().map_err(|e| invalid("schedule", e))?;
        let s = &self.scan;
        if !(s.ratio_start > 0.0 && s.ratio_start <= s.ratio_end && s.ratio_step > 0.0) {
            return Err(CliError::Config {
                path: "scan".into(),
                message: "need 0 < ratio_start ≤ ratio_end and ratio_step > 0".into(),
            });
        }
        if s.n_qubits.contains(&0) {
            return Err(CliError::Config { path: "scan.n_qubits".into(), message: "qubit counts must be positive".into() });
        }
        Ok(())
    }
}

/// Parses a configuration document. Experiment-dependent checks are left to
/// [`ExperimentConfig::validate`].
pub fn parse_config(text: &str, registry: &ExperimentRegistry) -> CliResult<ExperimentConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config { path: "<document>".into(), message: e.to_string() })?;
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config { path, message: e.into_inner().message().trim().to_string() }
    })?;
    registry.lookup(&doc.experiment)?;
    let sched = doc.schedule;
    Ok(ExperimentConfig {
        experiment: doc.experiment,
        system: doc.system.into(),
        schedule: SweepSchedule {
            ratio_start: sched.ratio_start,
            ratio_end: sched.ratio_end,
            tau: sched.tau,
            drive_on: sched.drive_on,
            dt: sched.dt,
            sample_stride: sched.sample_stride,
        },
        scan: doc.scan,
        calibration: doc.calibration,
        parity: doc.parity,
        output_dir: doc.output.dir,
        seed: doc.seed,
        emit_plot: doc.output.emit_plot,
        source: text.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<ExperimentConfig> {
        parse_config(text, &ExperimentRegistry::builtin())
    }

    #[test]
    fn empty_sections_give_device_defaults() {
        let cfg = parse("experiment = \"sweep\"\n[system]\n").unwrap();
        assert_eq!(cfg.system, SystemParams::default());
        assert_eq!(cfg.schedule, SweepSchedule::default());
        assert_eq!(cfg.system.lambda, 30.0);
        assert_eq!(cfg.system.gamma1, 2.0);
    }

    #[test]
    fn long_sweep_is_accepted() {
        let cfg = parse("experiment = \"sweep\"\n[schedule]\ntau = 1000.0\n").unwrap();
        assert_eq!(cfg.schedule.tau, 1000.0);
        cfg.validate(&ExperimentRegistry::builtin()).unwrap();
    }

    #[test]
    fn misspelled_key_is_named() {
        let err = parse("experiment = \"sweep\"\n[system]\nlamda = 20.0\n").unwrap_err().to_string();
        assert!(err.contains("lamda"), "{err}");
        assert!(err.contains("system"), "{err}");
    }

    #[test]
    fn type_mismatch_reports_path() {
        let err = parse("experiment = \"sweep\"\n[schedule]\ntau = \"long\"\n").unwrap_err().to_string();
        assert!(err.contains("schedule.tau"), "{err}");
    }

    #[test]
    fn unknown_experiment_and_missing_name() {
        assert!(matches!(parse("experiment = \"sweeep\"\n"), Err(CliError::UnknownExperiment { .. })));
        assert!(parse("[system]\n").unwrap_err().to_string().contains("experiment"));
    }

    #[test]
    fn seed_rules() {
        let registry = ExperimentRegistry::builtin();
        let unseeded = parse("experiment = \"uncertainty\"\n").unwrap();
        assert!(matches!(unseeded.validate(&registry), Err(CliError::Seed(_))));
        let seeded = parse("experiment = \"uncertainty\"\nseed = 7\n").unwrap();
        seeded.validate(&registry).unwrap();
        let stray = parse("experiment = \"ground-scan\"\nseed = 7\n").unwrap();
        assert!(matches!(stray.validate(&registry), Err(CliError::Seed(_))));
    }
}
