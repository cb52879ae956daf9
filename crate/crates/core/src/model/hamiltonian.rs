use super::basis::{CompositeBasis, Triplets};
use super::params::{angular, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, CsrMatrix};

fn driven_triplets(params: &SystemParams, basis: &CompositeBasis, detunings: &[f64]) -> Triplets {
    let n = params.n_qubits;
    let mut t = Triplets::new(basis.dim());
    let delta_r = angular(params.effective_delta_r());
    let g = angular(params.lambda) / (n as f64).sqrt();
    let drive = angular(params.omega_drive);

    for s in 0..basis.spin_states() {
        let spin_energy: f64 = (0..n)
            .map(|k| 0.5 * angular(detunings[k]) * if basis.is_excited(s, k) { 1.0 } else { -1.0 })
            .sum();
        for ph in 0..basis.fock_levels {
            let i = basis.index(s, ph);
            t.push(i, i, spin_energy + delta_r * ph as f64);
            if ph > 0 {
                let amp = (ph as f64).sqrt();
                // Ω(a + a†)
                t.push_hermitian_pair(basis.index(s, ph - 1), i, drive * amp);
                // (λ/√N)(a σ+_k + h.c.): |g_k, n⟩ → |e_k, n−1⟩
                for k in 0..n {
                    if !basis.is_excited(s, k) {
                        let up = s | basis.qubit_mask(k);
                        t.push_hermitian_pair(basis.index(up, ph - 1), i, g * amp);
                    }
                }
            }
            for k in 0..n {
                let qd = params.qubit_drive(k);
                if qd != 0.0 && !basis.is_excited(s, k) {
                    let up = s | basis.qubit_mask(k);
                    t.push_hermitian_pair(basis.index(up, ph), i, angular(qd) / (n as f64).sqrt());
                }
            }
        }
    }
    t
}

fn check_detunings(params: &SystemParams, detunings: &[f64]) -> Result<()> {
    params.validate()?;
    if detunings.len() != params.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{} qubit detunings for {} qubits",
            detunings.len(),
            params.n_qubits
        )));
    }
    if detunings.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidParameter("qubit detuning must be finite".into()));
    }
    Ok(())
}

/// Rotating-frame driven Tavis-Cummings Hamiltonian in rad/ns with a common
/// qubit detuning `delta_q` (MHz).
pub fn build_driven_tc_hamiltonian(params: &SystemParams, delta_q: f64) -> Result<ComplexMatrix> {
    let detunings = vec![delta_q; params.n_qubits];
    build_driven_tc_hamiltonian_with(params, &detunings)
}

/// As [`build_driven_tc_hamiltonian`] with one detuning per qubit.
pub fn build_driven_tc_hamiltonian_with(params: &SystemParams, detunings: &[f64]) -> Result<ComplexMatrix> {
    check_detunings(params, detunings)?;
    let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
    Ok(driven_triplets(params, &basis, detunings).to_dense())
}

/// Sparse form of the driven Hamiltonian, for spaces too large for dense work.
pub fn build_driven_tc_hamiltonian_sparse(params: &SystemParams, detunings: &[f64]) -> Result<CsrMatrix> {
    check_detunings(params, detunings)?;
    let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
    Ok(driven_triplets(params, &basis, detunings).to_csr())
}

/// H(Δq) = `fixed` + Δq·`detuning_generator`, with the generator ½Σσz in
/// rad/ns per MHz. Lets a sweep rebuild H(t) without reassembling matrices.
#[derive(Clone, Debug)]
pub struct SweptHamiltonian {
    pub fixed: CsrMatrix,
    pub detuning_generator: Vec<f64>,
}

impl SweptHamiltonian {
    /// `offsets` are per-qubit detuning offsets (MHz) folded into the fixed part.
    pub fn new(params: &SystemParams, offsets: &[f64]) -> Result<Self> {
        check_detunings(params, offsets)?;
        let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
        let fixed = driven_triplets(params, &basis, offsets).to_csr();
        let generator = (0..basis.dim())
            .map(|i| {
                let s = basis.split(i).0;
                let up = basis.excitations(s) as f64;
                0.5 * angular(1.0) * (2.0 * up - params.n_qubits as f64)
            })
            .collect();
        Ok(Self { fixed, detuning_generator: generator })
    }

    pub fn dim(&self) -> usize {
        self.detuning_generator.len()
    }

    pub fn dense_at(&self, delta_q: f64) -> ComplexMatrix {
        let mut h = self.fixed.to_dense();
        for (i, g) in self.detuning_generator.iter().enumerate() {
            h[(i, i)].re += g * delta_q;
        }
        h
    }
}

/// Undriven lab-frame model ωq·Jz + ωr·a†a + (λ/2)(aJ+ + a†J−) in rad/ns.
pub fn build_undriven_tc_hamiltonian(
    omega_q: f64,
    omega_r: f64,
    lambda: f64,
    n_qubits: usize,
    fock_cutoff: usize,
) -> Result<ComplexMatrix> {
    if !(omega_q > 0.0 && omega_r > 0.0 && lambda >= 0.0) {
        return Err(Error::InvalidParameter("undriven model needs positive frequencies".into()));
    }
    if n_qubits == 0 || fock_cutoff < 1 {
        return Err(Error::InvalidParameter("need at least one qubit and one photon level".into()));
    }
    let basis = CompositeBasis::new(n_qubits, fock_cutoff + 1)?;
    let mut t = Triplets::new(basis.dim());
    let g = 0.5 * angular(lambda);
    for s in 0..basis.spin_states() {
        let jz = basis.excitations(s) as f64 - 0.5 * n_qubits as f64;
        for ph in 0..basis.fock_levels {
            let i = basis.index(s, ph);
            t.push(i, i, angular(omega_q) * jz + angular(omega_r) * ph as f64);
            if ph > 0 {
                for k in 0..n_qubits {
                    if !basis.is_excited(s, k) {
                        let up = s | basis.qubit_mask(k);
                        t.push_hermitian_pair(basis.index(up, ph - 1), i, g * (ph as f64).sqrt());
                    }
                }
            }
        }
    }
    Ok(t.to_dense())
}

/// ‖HP − PH‖_F.
pub fn parity_commutator_norm(h: &ComplexMatrix, p: &ComplexMatrix) -> Result<f64> {
    if h.rows() != p.rows() || h.cols() != p.cols() || !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian {}x{} vs parity {}x{}",
            h.rows(),
            h.cols(),
            p.rows(),
            p.cols()
        )));
    }
    Ok(ComplexMatrix::commutator(h, p)?.frobenius_norm())
}

/// Critical coupling √(ωq·ωr) of the undriven (Dicke-type) transition.
pub fn dicke_critical_coupling(omega_q: f64, omega_r: f64) -> f64 {
    (omega_q * omega_r).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, C64};
    use crate::model::build_operator_set;

    fn undriven(params: &SystemParams) -> SystemParams {
        SystemParams { omega_drive: 0.0, omega_qubit_drive: Vec::new(), ..params.clone() }
    }

    #[test]
    fn bare_diagonal_element() {
        let p = SystemParams { lambda: 1e-300, omega_drive: 0.0, ..Default::default() };
        // λ must be positive; a vanishing λ leaves only the diagonal.
        let h = build_driven_tc_hamiltonian(&p, 25.0).unwrap();
        let expected = -(p.n_qubits as f64) * angular(25.0) / 2.0;
        assert!((h[(0, 0)].re - expected).abs() < 1e-12);
    }

    #[test]
    fn hermitian() {
        let p = SystemParams { omega_qubit_drive: vec![0.3, -0.2, 0.1, 0.5], ..Default::default() };
        let h = build_driven_tc_hamiltonian(&p, -13.0).unwrap();
        assert!(h.hermiticity_defect() <= 1e-12 * h.frobenius_norm());
    }

    #[test]
    fn undriven_conserves_excitations() {
        let p = undriven(&SystemParams { n_qubits: 3, fock_cutoff: 5, ..Default::default() });
        let ops = build_operator_set(&p).unwrap();
        let h = build_driven_tc_hamiltonian(&p, 17.0).unwrap();
        assert!(ComplexMatrix::commutator(&h, &ops.excitation).unwrap().frobenius_norm() <= 1e-10);
        assert!(parity_commutator_norm(&h, &ops.parity).unwrap() <= 1e-10);
    }

    #[test]
    fn undriven_blocks_by_excitation_number() {
        let p = undriven(&SystemParams { n_qubits: 2, fock_cutoff: 6, ..Default::default() });
        let ops = build_operator_set(&p).unwrap();
        let h = build_driven_tc_hamiltonian(&p, 40.0).unwrap();
        let levels = ops.excitation.diagonal();
        let mut off_block = 0.0;
        for i in 0..h.rows() {
            for j in 0..h.cols() {
                if levels[i] != levels[j] {
                    off_block += h[(i, j)].norm_sqr();
                }
            }
        }
        assert!(off_block.sqrt() <= 1e-10);
    }

    #[test]
    fn single_qubit_vacuum_rabi_splitting() {
        let p = SystemParams { n_qubits: 1, fock_cutoff: 3, delta_r: 0.0, omega_drive: 0.0, ..Default::default() };
        let h = build_driven_tc_hamiltonian(&p, 0.0).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        // Shift by the vacuum energy (0 for Δq = 0); one-excitation pair is ±λ.
        let lam = angular(p.lambda);
        assert!(eig.eigenvalues.iter().any(|e| (e - lam).abs() < 1e-12));
        assert!(eig.eigenvalues.iter().any(|e| (e + lam).abs() < 1e-12));
    }

    #[test]
    fn drive_breaks_parity() {
        let p = SystemParams::default();
        let ops = build_operator_set(&p).unwrap();
        let h = build_driven_tc_hamiltonian(&p, -13.0).unwrap();
        assert!(parity_commutator_norm(&h, &ops.parity).unwrap() > 1e-3);
        let qd = SystemParams { omega_drive: 0.0, omega_qubit_drive: vec![0.5; 4], ..p };
        let h = build_driven_tc_hamiltonian(&qd, -13.0).unwrap();
        assert!(parity_commutator_norm(&h, &ops.parity).unwrap() > 1e-3);
        assert!(parity_commutator_norm(&h, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn undriven_tc_commutes_with_parity() {
        let h = build_undriven_tc_hamiltonian(6200.0, 6200.0, 30.0, 4, 6).unwrap();
        let ops = build_operator_set(&SystemParams { fock_cutoff: 6, ..Default::default() }).unwrap();
        assert!(parity_commutator_norm(&h, &ops.parity).unwrap() <= 1e-10);
    }

    #[test]
    fn undriven_tc_resonant_doublet() {
        let (w, lam, n) = (6200.0, 30.0, 4);
        let h = build_undriven_tc_hamiltonian(w, w, lam, n, 3).unwrap();
        let ops = build_operator_set(&SystemParams { n_qubits: n, fock_cutoff: 3, ..Default::default() }).unwrap();
        // Project onto the L = 1 block.
        let idx: Vec<usize> = (0..h.rows()).filter(|&i| ops.excitation[(i, i)].re == 1.0).collect();
        let block = ComplexMatrix::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])]);
        let eig = hermitian_eig(&block).unwrap();
        let e = &eig.eigenvalues;
        let split = e[e.len() - 1] - e[0];
        assert!((split - angular(lam) * (n as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn dicke_scale_ratio() {
        let ratio = dicke_critical_coupling(6200.0, 6200.0) / 30.0;
        assert!((ratio - 206.666).abs() < 0.01);
    }

    #[test]
    fn frequency_rescaling() {
        // Multiplying every frequency by k multiplies H by k: a pure change of
        // time unit (MHz·ns ↔ GHz·ps).
        let p = SystemParams::default();
        let k = 1e3;
        let scaled = SystemParams {
            lambda: p.lambda * k,
            delta_r: p.delta_r * k,
            omega_drive: p.omega_drive * k,
            ..p.clone()
        };
        let h = build_driven_tc_hamiltonian(&p, -13.0).unwrap();
        let hk = build_driven_tc_hamiltonian(&scaled, -13.0 * k).unwrap();
        assert!((&hk - &h.scaled_real(k)).frobenius_norm() <= 1e-12 * hk.frobenius_norm());
    }

    #[test]
    fn swept_form_matches_direct_build() {
        let p = SystemParams { n_qubits: 2, fock_cutoff: 4, ..Default::default() };
        let swept = SweptHamiltonian::new(&p, &[0.3, -0.7]).unwrap();
        let direct = build_driven_tc_hamiltonian_with(&p, &[-20.0 + 0.3, -20.0 - 0.7]).unwrap();
        assert!((&swept.dense_at(-20.0) - &direct).frobenius_norm() < 1e-13);
        let sparse = build_driven_tc_hamiltonian_sparse(&p, &[1.0, 2.0]).unwrap();
        let dense = build_driven_tc_hamiltonian_with(&p, &[1.0, 2.0]).unwrap();
        assert_eq!(sparse.to_dense(), dense);
        assert_eq!(dense[(0, 0)].im, 0.0);
        let _ = C64::default();
    }
}
