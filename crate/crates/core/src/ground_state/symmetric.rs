//! Permutation-symmetric (maximal-j Dicke) sector |j = N/2, m⟩ ⊗ |n⟩.

use crate::error::{Error, Result};
use crate::linalg::{check_dimension, ComplexMatrix, C64};
use crate::model::{angular, SystemParams};

/// Hamiltonian and observables restricted to the symmetric sector. Index
/// `k·(ncut+1) + n` holds k excited qubits (m = k − N/2) and n photons.
#[derive(Clone, Debug)]
pub struct SymmetricSector {
    pub n_qubits: usize,
    pub fock_levels: usize,
    pub hamiltonian: ComplexMatrix,
    pub jz: Vec<f64>,
    pub jx: ComplexMatrix,
    pub photons: Vec<f64>,
}

/// ⟨j, m+1|J+|j, m⟩ with `k` = m + j excitations.
fn j_plus_element(n_qubits: usize, k: usize) -> f64 {
    let j = 0.5 * n_qubits as f64;
    let m = k as f64 - j;
    (j * (j + 1.0) - m * (m + 1.0)).sqrt()
}

fn common_qubit_drive(params: &SystemParams) -> Result<f64> {
    let first = params.qubit_drive(0);
    if (0..params.n_qubits).any(|k| params.qubit_drive(k) != first) {
        return Err(Error::InvalidParameter(
            "symmetric sector needs identical qubit drives on every qubit".into(),
        ));
    }
    Ok(first)
}

impl SymmetricSector {
    pub fn new(params: &SystemParams, delta_q: f64) -> Result<Self> {
        params.validate()?;
        if !delta_q.is_finite() {
            return Err(Error::InvalidParameter("delta_q must be finite".into()));
        }
        let n = params.n_qubits;
        let levels = params.fock_levels();
        let dim = (n + 1) * levels;
        check_dimension(dim)?;
        let qubit_drive = common_qubit_drive(params)?;
        let sqrt_n = (n as f64).sqrt();
        let g = angular(params.lambda) / sqrt_n;
        let drive = angular(params.omega_drive);
        let qdrive = angular(qubit_drive) / sqrt_n;
        let delta_r = angular(params.effective_delta_r());
        let idx = |k: usize, ph: usize| k * levels + ph;

        let mut h = ComplexMatrix::zeros(dim, dim);
        let mut jx = ComplexMatrix::zeros(dim, dim);
        let mut jz = vec![0.0; dim];
        let mut photons = vec![0.0; dim];
        for k in 0..=n {
            let m = k as f64 - 0.5 * n as f64;
            let jp = if k < n { j_plus_element(n, k) } else { 0.0 };
            for ph in 0..levels {
                let i = idx(k, ph);
                jz[i] = m;
                photons[i] = ph as f64;
                h[(i, i)] = C64::new(angular(delta_q) * m + delta_r * ph as f64, 0.0);
                if ph > 0 {
                    let amp = (ph as f64).sqrt();
                    h[(idx(k, ph - 1), i)] += C64::new(drive * amp, 0.0);
                    h[(i, idx(k, ph - 1))] += C64::new(drive * amp, 0.0);
                    if k < n {
                        // a J+ : |k, n⟩ → |k+1, n−1⟩
                        let v = C64::new(g * amp * jp, 0.0);
                        h[(idx(k + 1, ph - 1), i)] += v;
                        h[(i, idx(k + 1, ph - 1))] += v;
                    }
                }
                if k < n {
                    let up = idx(k + 1, ph);
                    h[(up, i)] += C64::new(qdrive * jp, 0.0);
                    h[(i, up)] += C64::new(qdrive * jp, 0.0);
                    jx[(up, i)] = C64::new(0.5 * jp, 0.0);
                    jx[(i, up)] = C64::new(0.5 * jp, 0.0);
                }
            }
        }
        Ok(Self { n_qubits: n, fock_levels: levels, hamiltonian: h, jz, jx, photons })
    }

    pub fn dim(&self) -> usize {
        self.jz.len()
    }

    /// Embeds a symmetric-sector state into the full 2^N ⊗ Fock product basis
    /// used by the model module.
    pub fn embed(&self, state: &[C64]) -> Vec<C64> {
        let n = self.n_qubits;
        let levels = self.fock_levels;
        let spin_states = 1usize << n;
        let mut out = vec![C64::default(); spin_states * levels];
        for s in 0..spin_states {
            let k = s.count_ones() as usize;
            let norm = binomial(n, k).sqrt();
            for ph in 0..levels {
                out[s * levels + ph] = state[k * levels + ph] / norm;
            }
        }
        out
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Driven Hamiltonian in the symmetric sector (rad/ns), dimension (N+1)(ncut+1).
pub fn build_symmetric_hamiltonian(params: &SystemParams, delta_q: f64) -> Result<ComplexMatrix> {
    Ok(SymmetricSector::new(params, delta_q)?.hamiltonian)
}
