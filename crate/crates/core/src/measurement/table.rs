use crate::error::{Error, Result};
use crate::linalg::{partial_trace, ComplexMatrix};
use crate::model::CompositeBasis;

/// Largest negative entry tolerated after readout correction.
pub const EPS_CORR: f64 = 0.05;

/// Tables may sum to tr ρ, which the integrator keeps within 1e-6 of one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Joint qubit occupation probabilities. Entry `i` is the bitstring i1…iN
/// read with Q1 as the most significant bit; a set bit means excited.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(n_qubits: usize, probs: Vec<f64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize || probs.len() != 1usize << n_qubits {
            return Err(Error::InvalidTable(format!("{} entries for {n_qubits} qubits", probs.len())));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -EPS_CORR) {
            return Err(Error::InvalidTable(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidTable(format!("entries sum to {sum}")));
        }
        Ok(Self { n_qubits, probs })
    }

    /// Uniform table over all 2^N outcomes.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        let len = 1usize << n_qubits.min(usize::BITS as usize - 1);
        Self::new(n_qubits, vec![1.0 / len as f64; len])
    }

    /// Table with all weight on outcome `index`.
    pub fn deterministic(n_qubits: usize, index: usize) -> Result<Self> {
        let mut probs = vec![0.0; 1usize << n_qubits.min(usize::BITS as usize - 1)];
        *probs
            .get_mut(index)
            .ok_or_else(|| Error::InvalidTable(format!("outcome {index} out of range")))? = 1.0;
        Self::new(n_qubits, probs)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Column label such as `p0101`.
    pub fn label(n_qubits: usize, index: usize) -> String {
        format!("p{index:0width$b}", width = n_qubits)
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Reads the table off the diagonal of ρ on the qubits ⊗ resonator basis,
    /// summing over photon number.
    pub fn from_density_diagonal(rho: &ComplexMatrix, basis: &CompositeBasis) -> Result<Self> {
        if rho.rows() != basis.dim() || !rho.is_square() {
            return Err(Error::DimensionMismatch(format!("ρ is {}x{}, basis has {}", rho.rows(), rho.cols(), basis.dim())));
        }
        let mut probs = vec![0.0; basis.spin_states()];
        for i in 0..basis.dim() {
            probs[basis.split(i).0] += rho[(i, i)].re;
        }
        Self::new(basis.n_qubits, probs)
    }
}

/// Traces out the resonator and reads the 2^N diagonal entries.
pub fn joint_probabilities(rho: &ComplexMatrix, basis: &CompositeBasis) -> Result<ProbabilityTable> {
    let mut dims = vec![2; basis.n_qubits];
    dims.push(basis.fock_levels);
    let keep: Vec<usize> = (0..basis.n_qubits).collect();
    let qubits = partial_trace(rho, &dims, &keep)?;
    let probs = (0..qubits.rows()).map(|i| qubits[(i, i)].re).collect();
    ProbabilityTable::new(basis.n_qubits, probs)
}

/// ⟨Jz⟩/(N/2) = Σ (2·popcount(i)/N − 1)·P_i.
pub fn jz_from_probabilities(table: &ProbabilityTable) -> f64 {
    let n = table.n_qubits as f64;
    table
        .probs
        .iter()
        .enumerate()
        .map(|(i, p)| (2.0 * i.count_ones() as f64 / n - 1.0) * p)
        .sum()
}

/// Sums of the table grouped by number of excited qubits, 0..=N.
pub fn group_by_excitation(table: &ProbabilityTable) -> Vec<f64> {
    let mut groups = vec![0.0; table.n_qubits + 1];
    for (i, p) in table.probs.iter().enumerate() {
        groups[i.count_ones() as usize] += p;
    }
    groups
}
