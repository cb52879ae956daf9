use crate::error::{Error, Result};

/// Linear frequency in MHz to angular frequency in rad/ns.
pub const MHZ_TO_RAD_PER_NS: f64 = 2.0 * std::f64::consts::PI * 1e-3;

/// Whether quoted decay/dephasing rates (κ, Γ) are angular (2π·f) or plain
/// inverse-time rates. Plain: Γ1 = 2.0 MHz means T1 = 500 ns.
pub const RATES_ARE_ANGULAR: bool = false;

pub fn angular(f_mhz: f64) -> f64 {
    f_mhz * MHZ_TO_RAD_PER_NS
}

/// Converts a configured rate in MHz to ns⁻¹ under [`RATES_ARE_ANGULAR`].
pub fn rate_per_ns(rate_mhz: f64) -> f64 {
    if RATES_ARE_ANGULAR {
        rate_mhz * MHZ_TO_RAD_PER_NS
    } else {
        rate_mhz * 1e-3
    }
}

/// Physical configuration. Frequencies are linear frequencies in MHz.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub n_qubits: usize,
    /// Highest resonator Fock level kept; the mode has `fock_cutoff + 1` levels.
    pub fock_cutoff: usize,
    /// Collective coupling; each qubit couples with `lambda / sqrt(N)`.
    pub lambda: f64,
    /// Resonator-drive detuning ωr − ωd (signed).
    pub delta_r: f64,
    /// Resonator drive Ω.
    pub omega_drive: f64,
    /// Per-qubit crosstalk drives Ω'k. Empty means all zero.
    pub omega_qubit_drive: Vec<f64>,
    /// Constant A²-induced shift added to `delta_r`.
    pub a2_shift: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_qubits: 4,
            fock_cutoff: 12,
            lambda: 30.0,
            delta_r: -30.0,
            omega_drive: 4.0,
            omega_qubit_drive: Vec::new(),
            a2_shift: 0.0,
            kappa1: 0.4,
            kappa2: 0.0,
            gamma1: 2.0,
            gamma2: 4.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_qubits == 0 {
            return bad("n_qubits must be at least 1".into());
        }
        if self.fock_cutoff < 2 {
            return bad(format!("fock_cutoff must be at least 2, got {}", self.fock_cutoff));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        for (name, v) in [("delta_r", self.delta_r), ("omega_drive", self.omega_drive), ("a2_shift", self.a2_shift)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        for (name, v) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a finite non-negative rate, got {v}"));
            }
        }
        if !self.omega_qubit_drive.is_empty() && self.omega_qubit_drive.len() != self.n_qubits {
            return bad(format!(
                "omega_qubit_drive has {} entries for {} qubits",
                self.omega_qubit_drive.len(),
                self.n_qubits
            ));
        }
        if self.omega_qubit_drive.iter().any(|v| !v.is_finite()) {
            return bad("omega_qubit_drive entries must be finite".into());
        }
        Ok(())
    }

    pub fn fock_levels(&self) -> usize {
        self.fock_cutoff + 1
    }

    /// Full tensor-space dimension 2^N·(ncut+1).
    pub fn composite_dim(&self) -> usize {
        (1usize << self.n_qubits.min(usize::BITS as usize - 1)).saturating_mul(self.fock_levels())
    }

    pub fn qubit_drive(&self, k: usize) -> f64 {
        self.omega_qubit_drive.get(k).copied().unwrap_or(0.0)
    }

    pub fn has_qubit_drive(&self) -> bool {
        self.omega_qubit_drive.iter().any(|&v| v != 0.0)
    }

    /// Δr including the A² shift.
    pub fn effective_delta_r(&self) -> f64 {
        self.delta_r + self.a2_shift
    }

    /// +1 for positive resonator detuning, −1 for negative. Negative detunings
    /// mirror the spectrum (H → −H up to a unitary), so "lowest" states are
    /// taken of `orientation · H`.
    pub fn orientation(&self) -> f64 {
        if self.effective_delta_r() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn with_cutoff(&self, fock_cutoff: usize) -> Self {
        Self { fock_cutoff, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_device_values() {
        let p = SystemParams::default();
        p.validate().unwrap();
        assert_eq!(p.n_qubits, 4);
        assert_eq!(p.lambda, 30.0);
        assert_eq!(p.gamma1, 2.0);
        assert_eq!(p.kappa1, 0.4);
        assert_eq!(p.composite_dim(), 16 * 13);
        // Each qubit couples at λ/√N = 15 MHz.
        assert_eq!(p.lambda / (p.n_qubits as f64).sqrt(), 15.0);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let bad = [
            SystemParams { n_qubits: 0, ..Default::default() },
            SystemParams { fock_cutoff: 1, ..Default::default() },
            SystemParams { lambda: 0.0, ..Default::default() },
            SystemParams { gamma1: -1.0, ..Default::default() },
            SystemParams { omega_qubit_drive: vec![0.1; 3], ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn unit_conversions() {
        assert!((angular(1000.0) - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(rate_per_ns(2.0), 2.0e-3);
    }
}
