//! Lindblad generator
//! dρ/dt = −i[H,ρ] + κ1 D[a] + 2κ2 D[a†a] + Σk Γ1 D[σ−k] + Σk (Γ2/2) D[σzk].

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, CsrMatrix, C64};
use crate::model::{
    annihilation, photon_diag, rate_per_ns, sigma_minus, sigma_z_diag, CompositeBasis, OperatorSet, SweptHamiltonian,
    SystemParams,
};

/// Rate multiplying D[σz] per unit Γ2. With 1/2, coherences decay as e^{−Γ2 t}.
pub const DEPHASING_CONVENTION: f64 = 0.5;

/// D[c]ρ = cρc† − ½{c†c, ρ}.
pub fn dissipator(c: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cd = c.adjoint();
    let jump = c.matmul(rho)?.matmul(&cd)?;
    let cdc = cd.matmul(c)?;
    Ok(&jump - &ComplexMatrix::anticommutator(&cdc, rho)?.scaled_real(0.5))
}

/// Dense reference form of the master equation. `h` in rad/ns.
pub fn lindblad_rhs(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    params: &SystemParams,
    ops: &OperatorSet,
) -> Result<ComplexMatrix> {
    if rho.rows() != ops.dim() || h.rows() != ops.dim() || !rho.is_square() || !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "ρ {}x{}, H {}x{}, operators {}",
            rho.rows(),
            rho.cols(),
            h.rows(),
            h.cols(),
            ops.dim()
        )));
    }
    let mut out = ComplexMatrix::commutator(h, rho)?.scaled(C64::new(0.0, -1.0));
    let mut add = |rate: f64, c: &ComplexMatrix| -> Result<()> {
        if rate > 0.0 {
            out += &dissipator(c, rho)?.scaled_real(rate);
        }
        Ok(())
    };
    add(rate_per_ns(params.kappa1), &ops.a)?;
    add(2.0 * rate_per_ns(params.kappa2), &ops.number_op)?;
    for k in 0..ops.n_qubits() {
        add(rate_per_ns(params.gamma1), &ops.sigma_minus[k])?;
        add(DEPHASING_CONVENTION * rate_per_ns(params.gamma2), &ops.sigma_z[k])?;
    }
    Ok(out)
}

/// Jump operator with at most one nonzero entry per row and per column,
/// stored as (row, column, value).
#[derive(Clone, Debug)]
struct MonomialJump {
    entries: Vec<(usize, usize, C64)>,
    rate: f64,
    real: bool,
}

/// Fast form of the master equation for repeated application. H(Δq) is
/// `hamiltonian + Δq·diag(detuning_generator)`; anticommutator terms are
/// folded into a non-Hermitian diagonal, diagonal jump operators into an
/// elementwise factor.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    dim: usize,
    hamiltonian: CsrMatrix,
    detuning_generator: Vec<f64>,
    damping: Vec<f64>,
    jumps: Vec<MonomialJump>,
    dephasing: Option<Vec<f64>>,
}

impl LindbladGenerator {
    /// Closed-system generator.
    pub fn new(hamiltonian: CsrMatrix, detuning_generator: Option<Vec<f64>>) -> Result<Self> {
        let dim = hamiltonian.rows();
        if hamiltonian.cols() != dim {
            return Err(Error::DimensionMismatch("Hamiltonian must be square".into()));
        }
        let detuning_generator = detuning_generator.unwrap_or_else(|| vec![0.0; dim]);
        if detuning_generator.len() != dim {
            return Err(Error::DimensionMismatch("detuning generator length".into()));
        }
        Ok(Self { dim, hamiltonian, detuning_generator, damping: vec![0.0; dim], jumps: Vec::new(), dephasing: None })
    }

    /// Adds `rate`·D[c] for a monomial `c`.
    pub fn add_jump(&mut self, c: &CsrMatrix, rate: f64) -> Result<()> {
        if c.rows() != self.dim || c.cols() != self.dim {
            return Err(Error::DimensionMismatch("jump operator dimension".into()));
        }
        if rate == 0.0 {
            return Ok(());
        }
        let mut seen = vec![false; self.dim];
        let mut entries = Vec::new();
        for r in 0..self.dim {
            let mut row = c.row_entries(r);
            if let Some((j, v)) = row.next() {
                if row.next().is_some() || seen[j] {
                    return Err(Error::InvalidParameter("jump operator is not monomial".into()));
                }
                seen[j] = true;
                self.damping[j] += 0.5 * rate * v.norm_sqr();
                entries.push((r, j, v));
            }
        }
        let real = entries.iter().all(|e| e.2.im == 0.0);
        self.jumps.push(MonomialJump { entries, rate, real });
        Ok(())
    }

    /// Adds `rate`·D[diag(d)] for a real diagonal operator.
    pub fn add_diagonal_jump(&mut self, d: &[f64], rate: f64) -> Result<()> {
        if d.len() != self.dim {
            return Err(Error::DimensionMismatch("diagonal jump length".into()));
        }
        if rate == 0.0 {
            return Ok(());
        }
        let n = self.dim;
        let f = self.dephasing.get_or_insert_with(|| vec![0.0; n * n]);
        for i in 0..n {
            for j in 0..n {
                f[i * n + j] -= 0.5 * rate * (d[i] - d[j]).powi(2);
            }
        }
        Ok(())
    }

    /// Generator for the driven model with per-qubit detuning offsets (MHz);
    /// Δq passed to [`apply`](Self::apply) is the common detuning in MHz.
    pub fn for_model(params: &SystemParams, offsets: &[f64]) -> Result<Self> {
        let swept = SweptHamiltonian::new(params, offsets)?;
        let basis = CompositeBasis::new(params.n_qubits, params.fock_levels())?;
        let mut gen = Self::new(swept.fixed, Some(swept.detuning_generator))?;
        gen.add_jump(&annihilation(&basis).to_csr(), rate_per_ns(params.kappa1))?;
        gen.add_diagonal_jump(&photon_diag(&basis), 2.0 * rate_per_ns(params.kappa2))?;
        for k in 0..params.n_qubits {
            gen.add_jump(&sigma_minus(&basis, k).to_csr(), rate_per_ns(params.gamma1))?;
            gen.add_diagonal_jump(&sigma_z_diag(&basis, k), DEPHASING_CONVENTION * rate_per_ns(params.gamma2))?;
        }
        Ok(gen)
    }

    /// A lone resonator: Δr a†a + Ω(a + a†) with energy decay κ1 (MHz).
    pub fn single_mode(fock_cutoff: usize, delta_r: f64, omega: f64, kappa1: f64) -> Result<Self> {
        use crate::model::angular;
        if fock_cutoff < 1 {
            return Err(Error::InvalidParameter("single mode needs at least two levels".into()));
        }
        let levels = fock_cutoff + 1;
        let mut entries = Vec::new();
        let mut lower = Vec::new();
        for n in 0..levels {
            if n > 0 {
                entries.push((n, n - 1, C64::new(angular(omega) * (n as f64).sqrt(), 0.0)));
                lower.push((n - 1, n, C64::new((n as f64).sqrt(), 0.0)));
            }
            entries.push((n, n, C64::new(angular(delta_r) * n as f64, 0.0)));
            if n + 1 < levels {
                entries.push((n, n + 1, C64::new(angular(omega) * ((n + 1) as f64).sqrt(), 0.0)));
            }
        }
        let h = CsrMatrix::from_sorted_triplets(levels, levels, entries);
        let mut gen = Self::new(h, None)?;
        gen.add_jump(&CsrMatrix::from_sorted_triplets(levels, levels, lower), rate_per_ns(kappa1))?;
        Ok(gen)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Hamiltonian at common detuning `delta_q` (MHz), dense, rad/ns.
    pub fn hamiltonian_at(&self, delta_q: f64) -> ComplexMatrix {
        let mut h = self.hamiltonian.to_dense();
        for (i, g) in self.detuning_generator.iter().enumerate() {
            h[(i, i)].re += g * delta_q;
        }
        h
    }

    /// out = L(ρ) for row-major ρ of Hermitian form. `scratch` has dim² entries.
    pub fn apply(&self, rho: &[C64], delta_q: f64, out: &mut [C64], scratch: &mut [C64]) {
        let n = self.dim;
        debug_assert!(rho.len() == n * n && out.len() == n * n && scratch.len() == n * n);
        // scratch = −i·H_eff·ρ with H_eff = H − (i/2)Σ rate c†c.
        for i in 0..n {
            let row = &mut scratch[i * n..(i + 1) * n];
            let d = C64::new(delta_q * self.detuning_generator[i], -self.damping[i]);
            for (o, &r) in row.iter_mut().zip(&rho[i * n..(i + 1) * n]) {
                *o = d * r;
            }
            for (j, h) in self.hamiltonian.row_entries(i) {
                let src = &rho[j * n..(j + 1) * n];
                if h.im == 0.0 {
                    let h = h.re;
                    for (o, &r) in row.iter_mut().zip(src) {
                        *o += r * h;
                    }
                } else {
                    for (o, &r) in row.iter_mut().zip(src) {
                        *o += h * r;
                    }
                }
            }
            for o in row.iter_mut() {
                *o = C64::new(o.im, -o.re);
            }
        }
        // −i(H_eff ρ − ρ H_eff†) = M + M† for Hermitian ρ.
        const TILE: usize = 16;
        for bi in (0..n).step_by(TILE) {
            for bj in (0..n).step_by(TILE) {
                for i in bi..(bi + TILE).min(n) {
                    for j in bj..(bj + TILE).min(n) {
                        out[i * n + j] = scratch[i * n + j] + scratch[j * n + i].conj();
                    }
                }
            }
        }
        if let Some(f) = &self.dephasing {
            for ((o, &r), &fk) in out.iter_mut().zip(rho).zip(f) {
                *o += r * fk;
            }
        }
        for jump in &self.jumps {
            for &(r, i, vi) in &jump.entries {
                let vi = vi * jump.rate;
                let orow = &mut out[r * n..(r + 1) * n];
                let rrow = &rho[i * n..(i + 1) * n];
                if jump.real {
                    for &(s, j, vj) in &jump.entries {
                        orow[s] += rrow[j] * (vi.re * vj.re);
                    }
                } else {
                    for &(s, j, vj) in &jump.entries {
                        orow[s] += vi * vj.conj() * rrow[j];
                    }
                }
            }
        }
    }

    /// Convenience wrapper around [`apply`](Self::apply).
    pub fn apply_to(&self, rho: &ComplexMatrix, delta_q: f64) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || !rho.is_square() {
            return Err(Error::DimensionMismatch(format!("ρ is {}x{}, generator {}", rho.rows(), rho.cols(), self.dim)));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        let mut scratch = vec![C64::default(); self.dim * self.dim];
        self.apply(rho.as_slice(), delta_q, out.as_mut_slice(), &mut scratch);
        Ok(out)
    }
}
