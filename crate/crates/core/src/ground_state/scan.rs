use rayon::prelude::*;

use super::symmetric::SymmetricSector;
use crate::dynamics::ratio_to_detuning;
use crate::error::{Error, Result};
use crate::linalg::{
    dimension_limit, hermitian_eig, lowest_eigenpair, ComplexMatrix, LanczosOptions, C64,
};
use crate::model::{build_driven_tc_hamiltonian_sparse, CompositeBasis, SystemParams};

/// Successive cutoffs must agree on jz_scaled to this level.
pub const CUTOFF_TOLERANCE: f64 = 1e-6;

/// Ground states closer than this (rad/ns) are flagged degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Ground-state moments at one value of λ/λc.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub ratio: f64,
    /// ⟨Jz⟩/(N/2).
    pub jz_scaled: f64,
    /// ⟨Jx⟩/(N/2).
    pub jx_scaled: f64,
    /// ⟨a†a⟩/N.
    pub photons_scaled: f64,
    /// rad/ns. Per qubit for mean-field points.
    pub ground_energy: f64,
    pub fock_cutoff: usize,
    pub degenerate: bool,
}

/// Lowest eigenvector of `orientation · H`, where orientation = sgn(Δr):
/// for negative detunings the physically relevant branch (the one the
/// all-ground state belongs to) sits at the top of the spectrum.
fn sector_ground_state(params: &SystemParams, ratio: f64) -> Result<(SymmetricSector, f64, Vec<C64>, bool)> {
    let delta_q = ratio_to_detuning(ratio, params.lambda, params.effective_delta_r())?;
    let sector = SymmetricSector::new(params, delta_q)?;
    let s = params.orientation();
    let eig = hermitian_eig(&sector.hamiltonian.scaled_real(s))?;
    let degenerate = eig.dim() > 1 && (eig.eigenvalues[1] - eig.eigenvalues[0]) < DEGENERACY_GAP;
    let energy = s * eig.eigenvalues[0];
    let vec = eig.vector(0);
    Ok((sector, energy, vec, degenerate))
}

fn moments(sector: &SymmetricSector, state: &[C64]) -> Result<(f64, f64, f64)> {
    let half_n = 0.5 * sector.n_qubits as f64;
    let jz: f64 = state.iter().zip(&sector.jz).map(|(z, m)| z.norm_sqr() * m).sum();
    let photons: f64 = state.iter().zip(&sector.photons).map(|(z, n)| z.norm_sqr() * n).sum();
    let jx = sector.jx.expectation(state)?;
    Ok((jz / half_n, jx / half_n, photons / sector.n_qubits as f64))
}

/// Ground state at a fixed cutoff, no escalation.
pub fn ground_state_point(params: &SystemParams, ratio: f64) -> Result<ScanPoint> {
    let (sector, energy, state, degenerate) = sector_ground_state(params, ratio)?;
    let (jz_scaled, jx_scaled, photons_scaled) = moments(&sector, &state)?;
    Ok(ScanPoint {
        ratio,
        jz_scaled,
        jx_scaled,
        photons_scaled,
        ground_energy: energy,
        fock_cutoff: params.fock_cutoff,
        degenerate,
    })
}

/// Doubles the cutoff from `params.fock_cutoff` until
/// jz_scaled moves by less than [`CUTOFF_TOLERANCE`]; returns the finer point.
pub fn converged_ground_state(params: &SystemParams, ratio: f64) -> Result<ScanPoint> {
    let mut cutoff = params.fock_cutoff;
    let mut prev = ground_state_point(params, ratio)?;
    let mut change = f64::NAN;
    loop {
        let next_cutoff = 2 * cutoff;
        let dim = (params.n_qubits + 1) * (next_cutoff + 1);
        if dim > dimension_limit() {
            return Err(Error::CutoffEscalation { ratio, cutoff, change, max: dimension_limit() });
        }
        let next = ground_state_point(&params.with_cutoff(next_cutoff), ratio)?;
        change = (next.jz_scaled - prev.jz_scaled).abs();
        if change < CUTOFF_TOLERANCE {
            return Ok(next);
        }
        prev = next;
        cutoff = next_cutoff;
    }
}

/// Ground-state scan over `ratios` in the symmetric sector with automatic
/// cutoff convergence. Points are computed in parallel, returned in order.
pub fn ground_state_scan(params: &SystemParams, ratios: &[f64]) -> Result<Vec<ScanPoint>> {
    params.validate()?;
    if let Some(&bad) = ratios.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!("ratio must be positive, got {bad}")));
    }
    ratios.par_iter().map(|&r| converged_ground_state(params, r)).collect()
}

/// Evenly spaced grid from `start` to `end` inclusive.
pub fn ratio_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

/// Ground state of the full 2^N ⊗ Fock space with per-qubit detunings
/// (MHz); used where qubits are not identical. Returns (energy in rad/ns,
/// jz_scaled). `start` seeds the Lanczos iteration on large spaces.
pub fn full_space_ground_state(
    params: &SystemParams,
    detunings: &[f64],
    start: Option<&[C64]>,
) -> Result<(f64, f64)> {
    let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
    let h = build_driven_tc_hamiltonian_sparse(params, detunings)?;
    let s = params.orientation();
    let jz_diag: Vec<f64> = (0..basis.dim())
        .map(|i| basis.excitations(basis.split(i).0) as f64 - 0.5 * params.n_qubits as f64)
        .collect();
    let half_n = 0.5 * params.n_qubits as f64;

    const DENSE_LIMIT: usize = 128;
    let (energy, state) = if basis.dim() <= DENSE_LIMIT {
        let dense: ComplexMatrix = h.to_dense().scaled_real(s);
        let eig = hermitian_eig(&dense)?;
        (s * eig.eigenvalues[0], eig.vector(0))
    } else {
        let oriented = h.scaled(s);
        let fallback;
        let start = match start {
            Some(v) => v,
            None => {
                fallback = vec![C64::new(1.0, 0.0); basis.dim()];
                &fallback
            }
        };
        let pair = lowest_eigenpair(&oriented, start, LanczosOptions { tol: 1e-11, ..Default::default() })?;
        (s * pair.value, pair.vector)
    };
    let jz: f64 = state.iter().zip(&jz_diag).map(|(z, m)| z.norm_sqr() * m).sum();
    Ok((energy, jz / half_n))
}
