//! Drive-strength calibration: coherent photon statistics, the vacuum-Rabi
//! probe, and recovery of Ω from the inferred amplitude.

mod nnls;

pub use nnls::nnls;

use crate::dynamics::{evolve, LindbladGenerator};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{angular, rate_per_ns, MHZ_TO_RAD_PER_NS};

/// Truncated mass above this sets the warning flag.
pub const TAIL_WARNING: f64 = 1e-6;

/// Resonator level populations P0..P_ncut.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonPopulations {
    pub pn: Vec<f64>,
    /// Mass lost beyond the cutoff exceeded [`TAIL_WARNING`].
    pub truncated: bool,
}

impl PhotonPopulations {
    pub fn new(pn: Vec<f64>) -> Result<Self> {
        if pn.is_empty() {
            return Err(Error::InvalidParameter("need at least one level".into()));
        }
        if let Some(p) = pn.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidParameter(format!("population {p} is negative or not finite")));
        }
        let sum: f64 = pn.iter().sum();
        if sum > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!("populations sum to {sum} > 1")));
        }
        Ok(Self { truncated: 1.0 - sum > TAIL_WARNING, pn })
    }

    /// Diagonal of a single-mode density matrix; roundoff negatives are
    /// clipped at zero.
    pub fn from_density(rho: &ComplexMatrix) -> Result<Self> {
        Self::new((0..rho.rows()).map(|n| rho[(n, n)].re.max(0.0)).collect())
    }

    pub fn mean_photons(&self) -> f64 {
        self.pn.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }
}

/// Poisson populations e^{−α²} α^{2n}/n! for n ≤ ncut.
pub fn coherent_populations(alpha: f64, ncut: usize) -> Result<PhotonPopulations> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be non-negative, got {alpha}")));
    }
    let a2 = alpha * alpha;
    let mut pn = Vec::with_capacity(ncut + 1);
    let mut p = (-a2).exp();
    for n in 0..=ncut {
        if n > 0 {
            p *= a2 / n as f64;
        }
        pn.push(p);
    }
    // Roundoff can push the sum a hair above one.
    let sum: f64 = pn.iter().sum();
    if sum > 1.0 {
        pn.iter_mut().for_each(|v| *v /= sum);
    }
    PhotonPopulations::new(pn)
}

/// α = (Σ n Pn)^½.
pub fn infer_alpha(pops: &PhotonPopulations) -> Result<f64> {
    if pops.pn.iter().any(|&p| p < 0.0) {
        return Err(Error::InvalidParameter("negative population".into()));
    }
    Ok(pops.mean_photons().sqrt())
}

/// Pe(t) = Σn Pn sin²(√n g t) for a qubit resonantly exchanging with the
/// resonator at coupling `g_mhz`.
pub fn rabi_probe_signal(pops: &PhotonPopulations, g_mhz: f64, times: &[f64]) -> Result<Vec<f64>> {
    if !(g_mhz > 0.0 && g_mhz.is_finite()) {
        return Err(Error::InvalidParameter(format!("probe coupling must be positive, got {g_mhz}")));
    }
    let g = angular(g_mhz);
    Ok(times
        .iter()
        .map(|&t| {
            pops.pn.iter().enumerate().map(|(n, p)| p * ((n as f64).sqrt() * g * t).sin().powi(2)).sum::<f64>().clamp(0.0, 1.0)
        })
        .collect())
}

/// Inverts a probe signal for P1..P_nmax by nonnegative least squares;
/// P0 takes the remaining mass, since the vacuum does not oscillate.
pub fn infer_populations_from_rabi(signal: &[f64], times: &[f64], g_mhz: f64, n_max: usize) -> Result<PhotonPopulations> {
    if signal.len() != times.len() {
        return Err(Error::DimensionMismatch(format!("{} samples for {} times", signal.len(), times.len())));
    }
    if !(g_mhz > 0.0) || n_max == 0 {
        return Err(Error::InvalidParameter("need g > 0 and n_max ≥ 1".into()));
    }
    let g = angular(g_mhz);
    let columns: Vec<Vec<f64>> =
        (1..=n_max).map(|n| times.iter().map(|&t| ((n as f64).sqrt() * g * t).sin().powi(2)).collect()).collect();
    let upper = nnls(&columns, signal)?;
    let excited: f64 = upper.iter().sum();
    let mut pn = vec![(1.0 - excited).max(0.0)];
    pn.extend(upper);
    let sum: f64 = pn.iter().sum();
    if sum > 1.0 {
        pn.iter_mut().for_each(|v| *v /= sum);
    }
    PhotonPopulations::new(pn)
}

/// Ω (MHz) = γA/t, read so that γA is the coherent amplitude |α| reached by
/// a resonant drive of an undamped cavity after `t_ns`: |α| = 2π·Ω·10⁻³·t.
pub fn recover_drive_strength(gamma_ratio: f64, amplitude: f64, t_ns: f64) -> Result<f64> {
    if !(t_ns > 0.0 && t_ns.is_finite()) {
        return Err(Error::InvalidParameter(format!("drive time must be positive, got {t_ns}")));
    }
    Ok(gamma_ratio * amplitude / t_ns / MHZ_TO_RAD_PER_NS)
}

/// Drives an initially empty resonator with Ω(a + a†) at detuning
/// `delta_r` (MHz) and decay κ1 for `t_ns`, returning the final populations.
pub fn simulate_drive(
    omega_mhz: f64,
    delta_r: f64,
    kappa1: f64,
    t_ns: f64,
    fock_cutoff: usize,
    dt: f64,
) -> Result<PhotonPopulations> {
    PhotonPopulations::from_density(&simulate_drive_state(omega_mhz, delta_r, kappa1, t_ns, fock_cutoff, dt)?)
}

fn simulate_drive_state(
    omega_mhz: f64,
    delta_r: f64,
    kappa1: f64,
    t_ns: f64,
    fock_cutoff: usize,
    dt: f64,
) -> Result<ComplexMatrix> {
    if !(t_ns > 0.0 && dt > 0.0) {
        return Err(Error::InvalidParameter("drive time and step must be positive".into()));
    }
    let gen = LindbladGenerator::single_mode(fock_cutoff, delta_r, omega_mhz, kappa1)?;
    let mut rho = ComplexMatrix::zeros(gen.dim(), gen.dim());
    rho[(0, 0)] = C64::new(1.0, 0.0);
    let steps = (t_ns / dt).round() as usize;
    evolve(&gen, &rho, dt, steps, steps.max(1), |_| 0.0, |_, _, _| Ok(()))
}

/// Resonant drive on an empty resonator.
pub fn simulate_resonant_drive(omega_mhz: f64, t_ns: f64, kappa1: f64, fock_cutoff: usize) -> Result<PhotonPopulations> {
    simulate_drive(omega_mhz, 0.0, kappa1, t_ns, fock_cutoff, 0.01)
}

/// Calibration loop: simulate the resonant drive, infer α from the
/// populations, and convert back to Ω (MHz) with γA = α.
pub fn calibrate_drive(omega_mhz: f64, t_ns: f64, kappa1: f64, fock_cutoff: usize) -> Result<f64> {
    let pops = simulate_resonant_drive(omega_mhz, t_ns, kappa1, fock_cutoff)?;
    recover_drive_strength(infer_alpha(&pops)?, 1.0, t_ns)
}

/// Analytic steady displacement |α| = Ω/√(Δr² + (κ1/2)²) of a detuned,
/// damped resonator (angular units).
pub fn steady_displacement(omega_mhz: f64, delta_r: f64, kappa1: f64) -> f64 {
    angular(omega_mhz) / (angular(delta_r).powi(2) + (0.5 * rate_per_ns(kappa1)).powi(2)).sqrt()
}

/// |⟨a⟩| after driving at `delta_r` for `t_ns`; compare with
/// [`steady_displacement`] once t ≫ 1/κ1.
pub fn simulate_detuned_displacement(omega_mhz: f64, delta_r: f64, kappa1: f64, t_ns: f64, fock_cutoff: usize) -> Result<f64> {
    let rho = simulate_drive_state(omega_mhz, delta_r, kappa1, t_ns, fock_cutoff, 0.02)?;
    let a: C64 = (1..rho.rows()).map(|n| rho[(n, n - 1)] * (n as f64).sqrt()).sum();
    Ok(a.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_closed_forms() {
        let vac = coherent_populations(0.0, 10).unwrap();
        assert_eq!(vac.pn[0], 1.0);
        assert!(vac.pn[1..].iter().all(|&p| p == 0.0));
        let one = coherent_populations(1.0, 30).unwrap();
        assert!((one.pn[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((one.mean_photons() - 1.0).abs() < 1e-12);
        assert!(!one.truncated);
        assert!(coherent_populations(3.0, 5).unwrap().truncated);
        assert!(coherent_populations(-1.0, 5).is_err());
    }

    #[test]
    fn alpha_roundtrip_and_fock_states() {
        for a in [0.0, 0.5, 1.5, 2.2, 3.0] {
            let got = infer_alpha(&coherent_populations(a, 30).unwrap()).unwrap();
            assert!((got - a).abs() < 1e-6, "{a} → {got}");
        }
        assert_eq!(infer_alpha(&PhotonPopulations::new(vec![0.0, 1.0]).unwrap()).unwrap(), 1.0);
        assert_eq!(infer_alpha(&PhotonPopulations::new(vec![1.0, 0.0]).unwrap()).unwrap(), 0.0);
        assert!(PhotonPopulations::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn probe_signal_closed_forms() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let vac = coherent_populations(0.0, 5).unwrap();
        assert!(rabi_probe_signal(&vac, 15.0, &times).unwrap().iter().all(|&p| p == 0.0));
        let fock1 = PhotonPopulations::new(vec![0.0, 1.0]).unwrap();
        let g = angular(15.0);
        let peak = std::f64::consts::PI / (2.0 * g);
        assert!((rabi_probe_signal(&fock1, 15.0, &[peak]).unwrap()[0] - 1.0).abs() < 1e-15);
        let coh = coherent_populations(1.0, 20).unwrap();
        let s = rabi_probe_signal(&coh, 15.0, &times).unwrap();
        assert_eq!(s[0], 0.0);
        assert!(s.iter().all(|&p| (0.0..=1.0).contains(&p)));
        assert!(rabi_probe_signal(&coh, 0.0, &times).is_err());
    }

    #[test]
    fn probe_inversion_roundtrip() {
        let truth = coherent_populations(1.2, 8).unwrap();
        let times: Vec<f64> = (1..=300).map(|i| i as f64 * 0.4).collect();
        let signal = rabi_probe_signal(&truth, 15.0, &times).unwrap();
        let got = infer_populations_from_rabi(&signal, &times, 15.0, 8).unwrap();
        for (a, b) in got.pn[1..].iter().zip(&truth.pn[1..]) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        // The vacuum takes the mass lost above the cutoff.
        let tail = 1.0 - truth.pn.iter().sum::<f64>();
        assert!((got.pn[0] - truth.pn[0] - tail).abs() < 1e-8);
    }

    #[test]
    fn drive_strength_scaling() {
        let base = recover_drive_strength(1.0, 2.0, 50.0).unwrap();
        assert!((recover_drive_strength(2.0, 2.0, 50.0).unwrap() - 2.0 * base).abs() < 1e-12);
        assert!((recover_drive_strength(1.0, 2.0, 100.0).unwrap() - 0.5 * base).abs() < 1e-12);
        assert!(recover_drive_strength(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn end_to_end_calibration() {
        for omega in [2.0, 4.0, 6.0] {
            let got = calibrate_drive(omega, 50.0, 0.0, 30).unwrap();
            assert!((got - omega).abs() < 0.01 * omega, "{omega} → {got}");
        }
        let lossy = calibrate_drive(4.0, 50.0, 0.4, 30).unwrap();
        assert!((lossy - 4.0).abs() < 0.05 * 4.0);
    }

    #[test]
    fn detuned_drive_reaches_steady_displacement() {
        let analytic = steady_displacement(4.0, -30.0, 0.4);
        let simulated = simulate_detuned_displacement(4.0, -30.0, 0.4, 40_000.0, 6).unwrap();
        assert!((simulated - analytic).abs() < 0.01 * analytic, "{simulated} vs {analytic}");
    }
}
