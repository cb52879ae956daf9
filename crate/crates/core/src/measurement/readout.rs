use super::table::{ProbabilityTable, EPS_CORR};
use crate::error::{Error, Result};

/// Per-qubit assignment fidelities (F_g, F_e).
#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutModel {
    fidelities: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// True → measured: multiply by ⊗k Fk.
    Forward,
    /// Measured → true: multiply by ⊗k Fk⁻¹.
    Inverse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectedTable {
    pub table: ProbabilityTable,
    /// Some entry fell below −EPS_CORR and was clamped.
    pub clamped: bool,
}

impl ReadoutModel {
    pub fn new(fidelities: Vec<(f64, f64)>) -> Result<Self> {
        for (k, &(fg, fe)) in fidelities.iter().enumerate() {
            for f in [fg, fe] {
                if !(f > 0.5 && f <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "readout fidelity {f} of qubit {} outside (0.5, 1]",
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { fidelities })
    }

    pub fn ideal(n_qubits: usize) -> Self {
        Self { fidelities: vec![(1.0, 1.0); n_qubits] }
    }

    pub fn n_qubits(&self) -> usize {
        self.fidelities.len()
    }

    /// Fk = [[F_g, 1 − F_e], [1 − F_g, F_e]]; columns are the true state.
    fn matrix(&self, k: usize, direction: Direction) -> [[f64; 2]; 2] {
        let (fg, fe) = self.fidelities[k];
        let m = [[fg, 1.0 - fe], [1.0 - fg, fe]];
        match direction {
            Direction::Forward => m,
            Direction::Inverse => {
                let det = fg + fe - 1.0;
                [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
            }
        }
    }
}

/// Applies ⊗k Fk (or its inverse) one qubit at a time, then clamps entries
/// below −EPS_CORR and renormalizes to unit sum.
pub fn apply_readout_correction(
    raw: &ProbabilityTable,
    model: &ReadoutModel,
    direction: Direction,
) -> Result<CorrectedTable> {
    let n = raw.n_qubits();
    if model.n_qubits() != n {
        return Err(Error::DimensionMismatch(format!("readout model for {} qubits, table has {n}", model.n_qubits())));
    }
    let mut p = raw.probs().to_vec();
    for k in 0..n {
        let f = model.matrix(k, direction);
        let mask = 1usize << (n - 1 - k);
        for i in (0..p.len()).filter(|i| i & mask == 0) {
            let (g, e) = (p[i], p[i | mask]);
            p[i] = f[0][0] * g + f[0][1] * e;
            p[i | mask] = f[1][0] * g + f[1][1] * e;
        }
    }
    let mut clamped = false;
    for v in &mut p {
        if *v < -EPS_CORR {
            *v = -EPS_CORR;
            clamped = true;
        }
    }
    let sum: f64 = p.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::InvalidTable(format!("corrected table sums to {sum}")));
    }
    p.iter_mut().for_each(|v| *v /= sum);
    Ok(CorrectedTable { table: ProbabilityTable::new(n, p)?, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_model() {
        let t = ProbabilityTable::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        for d in [Direction::Forward, Direction::Inverse] {
            let out = apply_readout_correction(&t, &ReadoutModel::ideal(2), d).unwrap();
            assert_eq!(out.table, t);
            assert!(!out.clamped);
        }
    }

    #[test]
    fn single_qubit_arithmetic() {
        let model = ReadoutModel::new(vec![(0.95, 0.90)]).unwrap();
        let truth = ProbabilityTable::deterministic(1, 0).unwrap();
        let measured = apply_readout_correction(&truth, &model, Direction::Forward).unwrap().table;
        assert!((measured.get(0) - 0.95).abs() < 1e-15 && (measured.get(1) - 0.05).abs() < 1e-15);
        let back = apply_readout_correction(&measured, &model, Direction::Inverse).unwrap().table;
        assert!((back.get(0) - 1.0).abs() < 1e-12 && back.get(1).abs() < 1e-12);
    }

    #[test]
    fn clamps_large_negative_entries() {
        // A measured table the model cannot have produced.
        let model = ReadoutModel::new(vec![(0.6, 0.6)]).unwrap();
        let t = ProbabilityTable::new(1, vec![1.0, 0.0]).unwrap();
        let out = apply_readout_correction(&t, &model, Direction::Inverse).unwrap();
        assert!(out.clamped);
        assert!(out.table.probs().iter().all(|&p| p >= -EPS_CORR - 1e-15));
        assert!((out.table.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_fidelities() {
        assert!(ReadoutModel::new(vec![(0.5, 0.9)]).is_err());
        assert!(ReadoutModel::new(vec![(0.9, 1.01)]).is_err());
        assert!(apply_readout_correction(
            &ProbabilityTable::uniform(2).unwrap(),
            &ReadoutModel::ideal(3),
            Direction::Forward
        )
        .is_err());
    }
}
