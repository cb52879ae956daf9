//! Monte-Carlo error bars from random per-qubit frequency offsets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dynamics::{evolve_sweep_with, ratio_to_detuning, SweepOptions, SweepSchedule};
use crate::error::{Error, Result};
use crate::ground_state::{full_space_ground_state, SymmetricSector};
use crate::linalg::hermitian_eig;
use crate::model::SystemParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OffsetDistribution {
    /// Uniform on [−σ, σ].
    #[default]
    Uniform,
    /// Normal with standard deviation σ.
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloConfig {
    pub sigma_mhz: f64,
    pub n_runs: usize,
    pub seed: u64,
    pub distribution: OffsetDistribution,
}

impl MonteCarloConfig {
    pub fn new(sigma_mhz: f64, n_runs: usize, seed: u64) -> Self {
        Self { sigma_mhz, n_runs, seed, distribution: OffsetDistribution::Uniform }
    }

    fn validate(&self) -> Result<()> {
        if self.n_runs < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 runs, got {}", self.n_runs)));
        }
        if !(self.sigma_mhz >= 0.0 && self.sigma_mhz.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be non-negative, got {}", self.sigma_mhz)));
        }
        Ok(())
    }
}

/// Sample mean and standard deviation of jz_scaled at each point.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintySummary {
    /// Sample times (ns); empty for ground-state scans.
    pub times: Vec<f64>,
    pub ratios: Vec<f64>,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl UncertaintySummary {
    pub fn max_sd(&self) -> f64 {
        self.sd.iter().copied().fold(0.0, f64::max)
    }
}

/// Constant per-qubit offsets (MHz) for run `run`, drawn from a generator
/// seeded by `seed` on stream `run`.
pub fn draw_offsets(cfg: &MonteCarloConfig, n_qubits: usize, run: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run as u64);
    if cfg.sigma_mhz == 0.0 {
        return vec![0.0; n_qubits];
    }
    match cfg.distribution {
        OffsetDistribution::Uniform => (0..n_qubits).map(|_| rng.random_range(-cfg.sigma_mhz..=cfg.sigma_mhz)).collect(),
        OffsetDistribution::Gaussian => {
            let normal = Normal::new(0.0, cfg.sigma_mhz).expect("finite non-negative sigma");
            (0..n_qubits).map(|_| normal.sample(&mut rng)).collect()
        }
    }
}

fn summarize(runs: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = runs.len() as f64;
    let len = runs[0].len();
    let mut mean = vec![0.0; len];
    let mut sd = vec![0.0; len];
    for i in 0..len {
        // Shifted by the first run so identical runs give exactly zero spread.
        let x0 = runs[0][i];
        let shift = runs.iter().map(|r| r[i] - x0).sum::<f64>() / n;
        let var = runs.iter().map(|r| (r[i] - x0 - shift).powi(2)).sum::<f64>() / (n - 1.0);
        mean[i] = x0 + shift;
        sd[i] = var.sqrt();
    }
    (mean, sd)
}

/// Repeats the swept evolution with random offsets; deterministic for a
/// fixed seed regardless of thread count.
pub fn monte_carlo_uncertainty(
    params: &SystemParams,
    schedule: &SweepSchedule,
    cfg: &MonteCarloConfig,
) -> Result<UncertaintySummary> {
    cfg.validate()?;
    let runs: Vec<_> = (0..cfg.n_runs)
        .into_par_iter()
        .map(|run| {
            let opts = SweepOptions { offsets: draw_offsets(cfg, params.n_qubits, run), ..Default::default() };
            evolve_sweep_with(params, schedule, &opts)
        })
        .collect::<Result<_>>()?;
    let series: Vec<Vec<f64>> = runs.iter().map(|r| r.jz_scaled.clone()).collect();
    let (mean, sd) = summarize(&series);
    Ok(UncertaintySummary { times: runs[0].times.clone(), ratios: runs[0].ratios.clone(), mean, sd })
}

/// Ground-state analogue: full-space ground states with random offsets at
/// `params.fock_cutoff`, one offset draw per run shared by every ratio.
pub fn monte_carlo_ground_scan(params: &SystemParams, ratios: &[f64], cfg: &MonteCarloConfig) -> Result<UncertaintySummary> {
    cfg.validate()?;
    params.validate()?;
    let delta_r = params.effective_delta_r();
    // Symmetric ground states seed the iterative solver on large spaces.
    let starts: Vec<(f64, Vec<_>)> = ratios
        .par_iter()
        .map(|&r| {
            let dq = ratio_to_detuning(r, params.lambda, delta_r)?;
            let sector = SymmetricSector::new(params, dq)?;
            let eig = hermitian_eig(&sector.hamiltonian.scaled_real(params.orientation()))?;
            Ok((dq, sector.embed(&eig.vector(0))))
        })
        .collect::<Result<_>>()?;
    let series: Vec<Vec<f64>> = (0..cfg.n_runs)
        .into_par_iter()
        .map(|run| {
            let offsets = draw_offsets(cfg, params.n_qubits, run);
            starts
                .iter()
                .map(|(dq, start)| {
                    let detunings: Vec<f64> = offsets.iter().map(|o| dq + o).collect();
                    full_space_ground_state(params, &detunings, Some(start)).map(|(_, jz)| jz)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let (mean, sd) = summarize(&series);
    Ok(UncertaintySummary { times: Vec::new(), ratios: ratios.to_vec(), mean, sd })
}
