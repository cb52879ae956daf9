//! Lawson-Hanson nonnegative least squares for small dense problems.

use crate::error::{Error, Result};

/// Least squares over the given columns by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns must be linearly independent.
fn least_squares(cols: &[&[f64]], b: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = vec![vec![0.0; k]; k];
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.to_vec();
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let c: f64 = qi.iter().zip(&v).map(|(a, b)| a * b).sum();
                r[i][j] += c;
                v.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
            return None;
        }
        r[j][j] = norm;
        q.push(v.into_iter().map(|x| x / norm).collect());
    }
    let qtb: Vec<f64> = q.iter().map(|qi| qi.iter().zip(b).map(|(a, b)| a * b).sum()).collect();
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| r[i][j] * z[j]).sum();
        z[i] = (qtb[i] - s) / r[i][i];
    }
    Some(z)
}

/// Minimizes ‖A x − b‖ subject to x ≥ 0. `columns[j]` is column j of A.
pub fn nnls(columns: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = columns.len();
    let m = b.len();
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::DimensionMismatch("NNLS columns must match the data length".into()));
    }
    let scale = b.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-12 * scale * m.max(n) as f64;
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let gradient = |x: &[f64]| -> Vec<f64> {
        let resid: Vec<f64> = (0..m).map(|i| b[i] - (0..n).map(|j| columns[j][i] * x[j]).sum::<f64>()).collect();
        columns.iter().map(|c| c.iter().zip(&resid).map(|(a, r)| a * r).sum()).collect()
    };
    let max_iter = 3 * n + 10;
    for _ in 0..max_iter {
        let w = gradient(&x);
        let candidate = (0..n).filter(|&j| !passive[j]).max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = candidate.filter(|&j| w[j] > tol) else {
            return Ok(x);
        };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let cols: Vec<&[f64]> = idx.iter().map(|&k| columns[k].as_slice()).collect();
            let Some(zp) = least_squares(&cols, b) else {
                // Dependent column: drop the newest and stop.
                passive[j] = false;
                return Ok(x);
            };
            if zp.iter().all(|&v| v > 0.0) {
                for (&k, &v) in idx.iter().zip(&zp) {
                    x[k] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&k, &v) in idx.iter().zip(&zp) {
                if v <= 0.0 {
                    alpha = alpha.min(x[k] / (x[k] - v));
                }
            }
            for (&k, &v) in idx.iter().zip(&zp) {
                x[k] += alpha * (v - x[k]);
                if x[k] <= tol {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
        }
    }
    Err(Error::NoConvergence { routine: "NNLS", iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_solution_exactly() {
        let cols = vec![vec![1.0, 0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0, -1.0], vec![1.0, 1.0, 0.0, 0.5]];
        let truth = [0.3, 0.0, 1.2];
        let b: Vec<f64> = (0..4).map(|i| (0..3).map(|j| cols[j][i] * truth[j]).sum()).collect();
        let x = nnls(&cols, &b).unwrap();
        for (a, t) in x.iter().zip(truth) {
            assert!((a - t).abs() < 1e-12);
        }
    }

    #[test]
    fn clips_at_zero() {
        // Unconstrained solution is negative; NNLS returns 0.
        let cols = vec![vec![1.0, 1.0]];
        assert_eq!(nnls(&cols, &[-1.0, -2.0]).unwrap(), vec![0.0]);
    }
}
