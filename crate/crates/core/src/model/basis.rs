use crate::linalg::{check_dimension, ComplexMatrix, CsrMatrix, C64};
use crate::error::Result;

/// Product basis |i1 … iN⟩ ⊗ |n⟩ with qubit Q1 as the most significant bit,
/// the resonator last, and bit value 1 meaning excited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositeBasis {
    pub n_qubits: usize,
    pub fock_levels: usize,
}

impl CompositeBasis {
    pub fn new(n_qubits: usize, fock_levels: usize) -> Result<Self> {
        let b = Self { n_qubits, fock_levels };
        check_dimension(b.dim())?;
        Ok(b)
    }

    pub fn spin_states(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.spin_states().saturating_mul(self.fock_levels)
    }

    #[inline]
    pub fn index(&self, spins: usize, photons: usize) -> usize {
        spins * self.fock_levels + photons
    }

    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.fock_levels, index % self.fock_levels)
    }

    /// Bit mask of qubit `k` (0-based, Q1 = 0) inside the spin index.
    #[inline]
    pub fn qubit_mask(&self, k: usize) -> usize {
        1 << (self.n_qubits - 1 - k)
    }

    #[inline]
    pub fn is_excited(&self, spins: usize, k: usize) -> bool {
        spins & self.qubit_mask(k) != 0
    }

    pub fn excitations(&self, spins: usize) -> usize {
        spins.count_ones() as usize
    }
}

/// Accumulates (row, col, value) entries; duplicates are summed.
#[derive(Clone, Debug)]
pub struct Triplets {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl Triplets {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        if value != 0.0 {
            self.entries.push((row, col, C64::new(value, 0.0)));
        }
    }

    /// Adds `value` at (row, col) and its conjugate at (col, row).
    pub fn push_hermitian_pair(&mut self, row: usize, col: usize, value: f64) {
        self.push(row, col, value);
        self.push(col, row, value);
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut sorted = self.entries.clone();
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(sorted.len());
        for (i, j, v) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        CsrMatrix::from_sorted_triplets(self.dim, self.dim, merged)
    }
}
