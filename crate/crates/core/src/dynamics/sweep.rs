use super::integrate::evolve;
use super::lindblad::LindbladGenerator;
use super::onset::quasi_steady_onset_series;
use super::schedule::{ratio_to_detuning, SweepSchedule};
use super::spectrum::SpectrumTracker;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, C64};
use crate::measurement::ProbabilityTable;
use crate::model::{angular, CompositeBasis, SystemParams};

/// Most negative eigenvalue of ρ tolerated at a sample.
pub const POSITIVITY_LIMIT: f64 = -1e-6;

/// Tracked levels at one sample. Energies are in MHz, measured from the
/// bare |g…g, 0⟩ level and oriented so the normal-phase ground state sits
/// at the bottom for either sign of Δr.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSample {
    pub energies_mhz: Vec<f64>,
    pub populations: Vec<f64>,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub n_qubits: usize,
    pub times: Vec<f64>,
    pub ratios: Vec<f64>,
    pub jz_scaled: Vec<f64>,
    /// ⟨a†a⟩.
    pub photons: Vec<f64>,
    /// ⟨L⟩, the total excitation number.
    pub excitations: Vec<f64>,
    pub purity: Vec<f64>,
    pub probability_tables: Vec<ProbabilityTable>,
    /// tr ρ − 1.
    pub trace_drift: Vec<f64>,
    /// Smallest eigenvalue of ρ, when positivity checking is on.
    pub min_eigenvalue: Vec<f64>,
    pub eigen_track: Option<Vec<EigenSample>>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    /// Per-qubit detuning offsets (MHz) added for the whole run; empty = none.
    pub offsets: Vec<f64>,
    /// Number of levels to track, 0 for none.
    pub track_levels: usize,
    pub check_positivity: bool,
    /// Defaults to |g…g⟩ ⊗ |0⟩.
    pub initial_state: Option<ComplexMatrix>,
    /// Hold λ/λc at this value instead of following the schedule.
    pub frozen_ratio: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { offsets: Vec::new(), track_levels: 0, check_positivity: true, initial_state: None, frozen_ratio: None }
    }
}

/// Swept open-system evolution from the all-ground vacuum.
pub fn evolve_sweep(params: &SystemParams, schedule: &SweepSchedule) -> Result<TrajectoryRecord> {
    evolve_sweep_with(params, schedule, &SweepOptions::default())
}

pub fn evolve_sweep_with(params: &SystemParams, schedule: &SweepSchedule, opts: &SweepOptions) -> Result<TrajectoryRecord> {
    schedule.validate()?;
    let mut params = params.clone();
    if !schedule.drive_on {
        params.omega_drive = 0.0;
    }
    params.validate()?;
    let n = params.n_qubits;
    let offsets = if opts.offsets.is_empty() { vec![0.0; n] } else { opts.offsets.clone() };
    let gen = LindbladGenerator::for_model(&params, &offsets)?;
    let basis = CompositeBasis::new(n, params.fock_levels())?;
    let dim = basis.dim();
    let lambda = params.lambda;
    let delta_r = params.effective_delta_r();
    ratio_to_detuning(schedule.ratio_start, lambda, delta_r)?;
    if let Some(r) = opts.frozen_ratio {
        ratio_to_detuning(r, lambda, delta_r)?;
    }
    let ratio_at = |t: f64| opts.frozen_ratio.unwrap_or_else(|| schedule.ratio_unchecked(t));
    let delta_q = |t: f64| lambda * lambda / (ratio_at(t).powi(2) * delta_r);

    let rho0 = match &opts.initial_state {
        Some(r) => r.clone(),
        None => {
            let mut r = ComplexMatrix::zeros(dim, dim);
            r[(0, 0)] = C64::new(1.0, 0.0);
            r
        }
    };

    let half_n = 0.5 * n as f64;
    let jz_diag: Vec<f64> = (0..dim).map(|i| basis.excitations(basis.split(i).0) as f64 - half_n).collect();
    let ph_diag: Vec<f64> = (0..dim).map(|i| basis.split(i).1 as f64).collect();
    let orientation = params.orientation();
    let mut tracker = (opts.track_levels > 0).then(|| SpectrumTracker::new(opts.track_levels.min(dim)));

    let mut rec = TrajectoryRecord {
        n_qubits: n,
        times: Vec::new(),
        ratios: Vec::new(),
        jz_scaled: Vec::new(),
        photons: Vec::new(),
        excitations: Vec::new(),
        purity: Vec::new(),
        probability_tables: Vec::new(),
        trace_drift: Vec::new(),
        min_eigenvalue: Vec::new(),
        eigen_track: tracker.as_ref().map(|_| Vec::new()),
    };

    evolve(&gen, &rho0, schedule.dt, schedule.steps(), schedule.sample_stride, delta_q, |_, t, rho| {
        let diag: Vec<f64> = (0..dim).map(|i| rho[(i, i)].re).collect();
        let jz: f64 = diag.iter().zip(&jz_diag).map(|(p, m)| p * m).sum();
        let photons: f64 = diag.iter().zip(&ph_diag).map(|(p, m)| p * m).sum();
        rec.times.push(t);
        rec.ratios.push(ratio_at(t));
        rec.jz_scaled.push(jz / half_n);
        rec.photons.push(photons);
        rec.excitations.push(jz + half_n + photons);
        rec.purity.push(rho.as_slice().iter().map(|z| z.norm_sqr()).sum());
        rec.trace_drift.push(rho.trace().re - 1.0);
        rec.probability_tables.push(ProbabilityTable::from_density_diagonal(rho, &basis)?);
        if opts.check_positivity {
            let min = hermitian_eigenvalues(rho)?[0];
            rec.min_eigenvalue.push(min);
            if min < POSITIVITY_LIMIT {
                return Err(Error::Positivity { min_eigenvalue: min, time_ns: t });
            }
        }
        if let Some(tracker) = tracker.as_mut() {
            let h = gen.hamiltonian_at(delta_q(t));
            let bare = h[(0, 0)].re;
            let levels = tracker.update(rho, &h, orientation)?;
            let track = rec.eigen_track.as_mut().expect("track present with tracker");
            track.push(EigenSample {
                energies_mhz: levels.energies.iter().map(|e| orientation * (e - bare) / angular(1.0)).collect(),
                populations: levels.populations,
                ambiguous: levels.ambiguous,
            });
        }
        Ok(())
    })?;
    Ok(rec)
}

/// Onset of the quasi-steady regime of jz_scaled along a sweep; see
/// [`quasi_steady_onset_series`].
pub fn quasi_steady_onset(traj: &TrajectoryRecord, window: f64, slope_tol: f64) -> Result<Option<f64>> {
    quasi_steady_onset_series(&traj.ratios, &traj.jz_scaled, window, slope_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state::SymmetricSector;
    use crate::linalg::hermitian_eig;

    fn closed(params: SystemParams) -> SystemParams {
        SystemParams { kappa1: 0.0, kappa2: 0.0, gamma1: 0.0, gamma2: 0.0, ..params }
    }

    fn short_schedule() -> SweepSchedule {
        SweepSchedule { tau: 60.0, ..Default::default() }
    }

    #[test]
    fn record_shapes_and_first_sample() {
        let p = SystemParams { n_qubits: 2, fock_cutoff: 4, ..Default::default() };
        let rec = evolve_sweep(&p, &short_schedule()).unwrap();
        assert_eq!(rec.len(), 61);
        assert_eq!(rec.jz_scaled[0], -1.0);
        assert_eq!(rec.ratios[0], 0.5);
        assert!((rec.ratios[60] - 2.5).abs() < 1e-12);
        assert!(rec.trace_drift.iter().all(|d| d.abs() < 1e-10));
        assert!(rec.min_eigenvalue.iter().all(|&m| m > POSITIVITY_LIMIT));
    }

    #[test]
    fn closed_system_is_unitary() {
        let p = closed(SystemParams { n_qubits: 2, fock_cutoff: 5, ..Default::default() });
        let rec = evolve_sweep(&p, &short_schedule()).unwrap();
        assert!(rec.trace_drift.iter().all(|d| d.abs() <= 1e-8));
        assert!(rec.purity.iter().all(|q| (q - 1.0).abs() <= 1e-7));
    }

    #[test]
    fn undriven_closed_sweep_conserves_excitations() {
        let p = closed(SystemParams { n_qubits: 2, fock_cutoff: 5, omega_drive: 0.0, ..Default::default() });
        // Start from a state with one excitation shared between qubit and field.
        let basis = CompositeBasis::new(2, 6).unwrap();
        let mut psi = vec![C64::default(); basis.dim()];
        psi[basis.index(0, 1)] = C64::new(0.6, 0.0);
        psi[basis.index(basis.qubit_mask(0), 0)] = C64::new(0.8, 0.0);
        let opts = SweepOptions { initial_state: Some(ComplexMatrix::outer(&psi)), ..Default::default() };
        let rec = evolve_sweep_with(&p, &short_schedule(), &opts).unwrap();
        assert!(rec.excitations.iter().all(|l| (l - 1.0).abs() < 1e-6));
    }

    #[test]
    fn frozen_ground_state_is_stationary() {
        let p = SystemParams {
            n_qubits: 2,
            fock_cutoff: 6,
            omega_drive: 0.0,
            kappa1: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            ..Default::default()
        };
        let ratio = 1.7;
        let dq = ratio_to_detuning(ratio, p.lambda, p.delta_r).unwrap();
        let sector = SymmetricSector::new(&p, dq).unwrap();
        let eig = hermitian_eig(&sector.hamiltonian.scaled_real(p.orientation())).unwrap();
        let psi = sector.embed(&eig.vector(0));
        let opts = SweepOptions {
            initial_state: Some(ComplexMatrix::outer(&psi)),
            frozen_ratio: Some(ratio),
            ..Default::default()
        };
        let schedule = SweepSchedule { tau: 600.0, sample_stride: 500, ..Default::default() };
        let rec = evolve_sweep_with(&p, &schedule, &opts).unwrap();
        let first = rec.jz_scaled[0];
        assert!(rec.jz_scaled.iter().all(|j| (j - first).abs() < 1e-8));
    }

    #[test]
    fn pure_decay_lowers_jz_monotonically() {
        let p = SystemParams { n_qubits: 2, fock_cutoff: 3, omega_drive: 0.0, lambda: 1e-9, ..Default::default() };
        let dim = 4 * 4;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        rho[(dim - 4, dim - 4)] = C64::new(1.0, 0.0);
        let opts = SweepOptions { initial_state: Some(rho), ..Default::default() };
        let rec = evolve_sweep_with(&p, &SweepSchedule { tau: 1000.0, ..Default::default() }, &opts).unwrap();
        assert_eq!(rec.jz_scaled[0], 1.0);
        assert!(rec.jz_scaled.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(*rec.jz_scaled.last().unwrap() < 0.0);
    }

    #[test]
    fn repeated_runs_are_identical() {
        let p = SystemParams { n_qubits: 1, fock_cutoff: 4, ..Default::default() };
        let a = evolve_sweep(&p, &short_schedule()).unwrap();
        let b = evolve_sweep(&p, &short_schedule()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mirrored_detuning_gives_same_populations() {
        let p = SystemParams { n_qubits: 2, fock_cutoff: 5, ..Default::default() };
        let neg = evolve_sweep(&p, &short_schedule()).unwrap();
        let pos = evolve_sweep(&SystemParams { delta_r: 30.0, ..p }, &short_schedule()).unwrap();
        for (a, b) in neg.jz_scaled.iter().zip(&pos.jz_scaled) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn tracking_starts_in_ground_state() {
        let p = SystemParams { n_qubits: 2, fock_cutoff: 5, ..Default::default() };
        let opts = SweepOptions { track_levels: 3, ..Default::default() };
        let rec = evolve_sweep_with(&p, &short_schedule(), &opts).unwrap();
        let track = rec.eigen_track.unwrap();
        assert_eq!(track.len(), rec.times.len());
        let first = &track[0];
        assert!(first.populations[0] > first.populations[1] && first.populations[0] > first.populations[2]);
        assert!(first.energies_mhz[0].abs() < 1.0);
    }
}
