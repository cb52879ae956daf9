//! Dense complex linear algebra: matrices, Kronecker products, partial
//! traces and Hermitian eigendecomposition.

mod eig;
mod lanczos;
mod matrix;
mod sparse;

use std::sync::OnceLock;

pub use eig::{hermitian_eig, hermitian_eigenvalues, EigenDecomposition, HERMITICITY_TOLERANCE};
pub use lanczos::{lowest_eigenpair, Eigenpair, LanczosOptions};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use sparse::CsrMatrix;


use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 4096;

/// Cap on any composite Hilbert-space dimension, read once from
/// `TCCLI_MAX_DIM` (default 4096).
pub fn dimension_limit() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("TCCLI_MAX_DIM")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&d| d > 0)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

pub fn check_dimension(dim: usize) -> Result<()> {
    let max = dimension_limit();
    if dim > max {
        Err(Error::DimensionLimit { dim, max })
    } else {
        Ok(())
    }
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows()).ok_or(Error::DimensionLimit { dim: usize::MAX, max: dimension_limit() })?;
    let cols = a.cols().checked_mul(b.cols()).ok_or(Error::DimensionLimit { dim: usize::MAX, max: dimension_limit() })?;
    check_dimension(rows.max(cols))?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Left-to-right Kronecker product of a list of factors.
pub fn kron_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Traces out every subsystem not listed in `keep`. Subsystem 0 is the most
/// significant factor of the composite index. Kept subsystems appear in
/// ascending order in the result.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch("partial trace of a non-square matrix".into()));
    }
    let total: usize = dims.iter().product();
    if total != rho.rows() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} do not multiply to {}",
            rho.rows()
        )));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidSubsystem("keep set is empty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystem(format!("subsystem {bad} out of range (have {})", dims.len())));
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim = total / kept_dim;

    // Split every composite index into (kept part, traced part).
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(kept_dim); traced_dim];
    for full in 0..total {
        let mut rem = full;
        let mut digits = vec![0; dims.len()];
        for (s, &d) in dims.iter().enumerate().rev() {
            digits[s] = rem % d;
            rem /= d;
        }
        let (mut ki, mut ti) = (0, 0);
        for (s, &d) in dims.iter().enumerate() {
            if keep.binary_search(&s).is_ok() {
                ki = ki * d + digits[s];
            } else {
                ti = ti * d + digits[s];
            }
        }
        groups[ti].push((ki, full));
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for group in &groups {
        for &(ki, fi) in group {
            for &(kj, fj) in group {
                out[(ki, kj)] += rho[(fi, fj)];
            }
        }
    }
    Ok(out)
}
