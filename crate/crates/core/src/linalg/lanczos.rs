//! Restarted Lanczos for the lowest eigenpair of a large sparse Hermitian
//! operator. Used where the composite space is too large for a dense
//! decomposition (full tensor space, N = 8).

use num_complex::Complex64 as C64;

use super::eig::{fix_phase, tridiagonal_ql};
use super::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Krylov vectors per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Converged when ‖Hx − θx‖ ≤ tol · max(|θ|, 1).
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { krylov_dim: 60, max_restarts: 200, tol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of `h`, starting from `start` (need not be normalized).
pub fn lowest_eigenpair(h: &CsrMatrix, start: &[C64], opts: LanczosOptions) -> Result<Eigenpair> {
    let n = h.rows();
    if h.cols() != n || start.len() != n {
        return Err(Error::DimensionMismatch("Lanczos operator and start vector disagree".into()));
    }
    let mut x: Vec<C64> = start.to_vec();
    let mut nx = norm(&x);
    if nx == 0.0 || !nx.is_finite() {
        // Deterministic fallback start.
        x = (0..n).map(|i| C64::new(1.0 / (1.0 + i as f64), 0.0)).collect();
        nx = norm(&x);
    }
    x.iter_mut().for_each(|z| *z /= nx);

    let m_max = opts.krylov_dim.clamp(2, n.max(2)).min(n);
    let mut hx = vec![C64::default(); n];
    for _restart in 0..opts.max_restarts {
        let mut basis: Vec<Vec<C64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta = Vec::with_capacity(m_max);
        let mut w = vec![C64::default(); n];
        for j in 0..m_max {
            h.mul_vec_into(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // Full reorthogonalization, twice.
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let b = norm(&w);
            if j + 1 == m_max || b <= 1e-14 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }

        let m = alpha.len();
        let mut d = alpha.clone();
        let mut e = vec![0.0; m];
        e[..m - 1].copy_from_slice(&beta[..m - 1]);
        let mut z = vec![0.0; m * m];
        for i in 0..m {
            z[i * m + i] = 1.0;
        }
        tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
        let kmin = (0..m).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        let theta = d[kmin];

        x.iter_mut().for_each(|v| *v = C64::default());
        for (i, q) in basis.iter().enumerate().take(m) {
            let c = z[i * m + kmin];
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi += qi * c;
            }
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);

        h.mul_vec_into(&x, &mut hx);
        let resid = hx.iter().zip(&x).map(|(a, b)| (a - b * theta).norm_sqr()).sum::<f64>().sqrt();
        if resid <= opts.tol * theta.abs().max(1.0) || m == n {
            fix_phase(&mut x);
            return Ok(Eigenpair { value: theta, vector: x, residual: resid });
        }
    }
    Err(Error::NoConvergence { routine: "Lanczos", iterations: opts.max_restarts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, ComplexMatrix};

    #[test]
    fn matches_dense_ground_state() {
        // Gapped tridiagonal chain with complex hopping.
        let n = 200;
        let h = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(0.05 * i as f64 + 0.3 * (i as f64 * 0.37).sin(), 0.0)
            } else if i + 1 == j {
                C64::new(0.5, 0.2)
            } else if j + 1 == i {
                C64::new(0.5, -0.2)
            } else {
                C64::default()
            }
        });
        let dense = hermitian_eig(&h).unwrap();
        let sparse = CsrMatrix::from_dense(&h);
        let start = vec![C64::new(1.0, 0.0); n];
        let pair = lowest_eigenpair(&sparse, &start, LanczosOptions::default()).unwrap();
        assert!((pair.value - dense.eigenvalues[0]).abs() < 1e-9);
        let overlap: C64 = dense.vector(0).iter().zip(&pair.vector).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn small_operator_terminates() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, -2.0, 1.0]);
        let pair =
            lowest_eigenpair(&CsrMatrix::from_dense(&h), &[C64::new(1.0, 0.0); 3], LanczosOptions::default())
                .unwrap();
        assert!((pair.value + 2.0).abs() < 1e-12);
    }
}
