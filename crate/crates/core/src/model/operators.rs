use super::basis::{CompositeBasis, Triplets};
use super::params::SystemParams;
use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};

/// Dense operators on the composite space (qubits Q1..QN, then resonator).
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub basis: CompositeBasis,
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    pub sigma_plus: Vec<ComplexMatrix>,
    pub sigma_minus: Vec<ComplexMatrix>,
    pub sigma_z: Vec<ComplexMatrix>,
    /// Σk σz_k / 2.
    pub jz: ComplexMatrix,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub j_plus: ComplexMatrix,
    pub j_minus: ComplexMatrix,
    /// a†a.
    pub number_op: ComplexMatrix,
    /// L = Jz + a†a + N/2, the total excitation number.
    pub excitation: ComplexMatrix,
    /// P = exp(iπL).
    pub parity: ComplexMatrix,
}

impl OperatorSet {
    pub fn n_qubits(&self) -> usize {
        self.basis.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

pub(crate) fn annihilation(basis: &CompositeBasis) -> Triplets {
    let mut t = Triplets::new(basis.dim());
    for s in 0..basis.spin_states() {
        for n in 1..basis.fock_levels {
            t.push(basis.index(s, n - 1), basis.index(s, n), (n as f64).sqrt());
        }
    }
    t
}

pub(crate) fn sigma_minus(basis: &CompositeBasis, k: usize) -> Triplets {
    let mut t = Triplets::new(basis.dim());
    let mask = basis.qubit_mask(k);
    for s in (0..basis.spin_states()).filter(|s| s & mask != 0) {
        for n in 0..basis.fock_levels {
            t.push(basis.index(s & !mask, n), basis.index(s, n), 1.0);
        }
    }
    t
}

/// Diagonal of σz_k: +1 excited, −1 ground.
pub(crate) fn sigma_z_diag(basis: &CompositeBasis, k: usize) -> Vec<f64> {
    (0..basis.dim())
        .map(|i| if basis.is_excited(basis.split(i).0, k) { 1.0 } else { -1.0 })
        .collect()
}

pub(crate) fn photon_diag(basis: &CompositeBasis) -> Vec<f64> {
    (0..basis.dim()).map(|i| basis.split(i).1 as f64).collect()
}

/// Builds every operator of the composite space.
pub fn build_operator_set(params: &SystemParams) -> Result<OperatorSet> {
    params.validate()?;
    let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
    let n = params.n_qubits;
    let dim = basis.dim();

    let a = annihilation(&basis).to_dense();
    let a_dag = a.adjoint();
    let sigma_minus: Vec<ComplexMatrix> = (0..n).map(|k| sigma_minus(&basis, k).to_dense()).collect();
    let sigma_plus: Vec<ComplexMatrix> = sigma_minus.iter().map(ComplexMatrix::adjoint).collect();
    let sigma_z: Vec<ComplexMatrix> =
        (0..n).map(|k| ComplexMatrix::from_real_diagonal(&sigma_z_diag(&basis, k))).collect();

    let mut j_minus = ComplexMatrix::zeros(dim, dim);
    let mut jz = ComplexMatrix::zeros(dim, dim);
    for k in 0..n {
        j_minus += &sigma_minus[k];
        jz += &sigma_z[k].scaled_real(0.5);
    }
    let j_plus = j_minus.adjoint();
    let jx = (&j_plus + &j_minus).scaled_real(0.5);
    let jy = (&j_plus - &j_minus).scaled(C64::new(0.0, -0.5));

    let photons = photon_diag(&basis);
    let number_op = ComplexMatrix::from_real_diagonal(&photons);
    let levels: Vec<f64> = (0..dim)
        .map(|i| (basis.excitations(basis.split(i).0) + basis.split(i).1) as f64)
        .collect();
    let excitation = ComplexMatrix::from_real_diagonal(&levels);
    let parity = ComplexMatrix::from_real_diagonal(
        &levels.iter().map(|&l| if (l as u64) % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>(),
    );

    Ok(OperatorSet {
        basis,
        a,
        a_dag,
        sigma_plus,
        sigma_minus,
        sigma_z,
        jz,
        jx,
        jy,
        j_plus,
        j_minus,
        number_op,
        excitation,
        parity,
    })
}
