//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL iteration.

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Inputs whose anti-Hermitian part is below this fraction of ‖H‖_F are
/// symmetrized; anything larger is rejected.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

const QL_MAX_SWEEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`; its largest-magnitude
    /// component is real and positive.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V·diag(e)·V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum()
        })
    }
}

fn checked_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let norm = h.frobenius_norm();
    let defect = h.hermiticity_defect();
    if norm > 0.0 && defect > HERMITICITY_TOLERANCE * norm {
        return Err(Error::NotHermitian { defect: defect / norm, threshold: HERMITICITY_TOLERANCE });
    }
    let mut a = h.clone();
    a.symmetrize();
    Ok(a)
}

/// Householder tridiagonalization A = W·T·W† with T real symmetric
/// tridiagonal. Returns (diagonal, subdiagonal padded with a trailing 0, W)
/// where W is only formed when `want_vectors` is set.
fn tridiagonalize(mut a: ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Vec<f64>, Option<ComplexMatrix>) {
    let n = a.rows();
    let mut reflectors: Vec<(usize, Vec<C64>)> = Vec::new();
    let mut p = vec![C64::default(); n];

    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        let tail_norm: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail_norm == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail_norm).sqrt();
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // Trailing block update: A22 ← A22 − 2 v w† − 2 w v†, w = A22 v − (v†A22 v) v.
        let off = k + 1;
        let m = n - off;
        for i in 0..m {
            let row = &a.as_slice()[(off + i) * n + off..(off + i) * n + n];
            p[i] = row.iter().zip(&v).map(|(aij, vj)| aij * vj).sum();
        }
        let kappa: C64 = v.iter().zip(&p[..m]).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C64> = (0..m).map(|i| p[i] - v[i] * kappa.re).collect();
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[(off + i, off + j)] -= upd * 2.0;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            a[(i, k)] = C64::default();
            a[(k, i)] = C64::default();
        }
        if want_vectors {
            reflectors.push((off, v));
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut sub = vec![0.0; n];
    // Phase rotation D making the subdiagonal real and nonnegative.
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1, k)];
        let mag = e.norm();
        sub[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (e / mag) } else { phases[k] };
    }

    let w = want_vectors.then(|| {
        // W = H_0 H_1 ... H_{n-3} D, accumulated from the right.
        let mut w = ComplexMatrix::from_diagonal(&phases);
        for (off, v) in reflectors.iter().rev() {
            let m = v.len();
            for j in 0..n {
                let dot: C64 = (0..m).map(|i| v[i].conj() * w[(off + i, j)]).sum();
                if dot.norm_sqr() == 0.0 {
                    continue;
                }
                for i in 0..m {
                    w[(off + i, j)] -= v[i] * dot * 2.0;
                }
            }
        }
        w
    });
    (diag, sub, w)
}

/// Implicit QL on a real symmetric tridiagonal matrix. `e[i]` couples `i`
/// and `i + 1`; `e[n-1]` must be 0. When `z` is given (row-major n×n) the
/// rotations are accumulated into its columns.
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_SWEEPS {
                    return Err(Error::NoConvergence { routine: "tridiagonal QL", iterations: QL_MAX_SWEEPS });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zi1 = z[k * n + i + 1];
                            let zi = z[k * n + i];
                            z[k * n + i + 1] = s * zi + c * zi1;
                            z[k * n + i] = c * zi - s * zi1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Makes the largest-magnitude component real positive (first index wins ties).
pub(crate) fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[best] = C64::new(v[best].re, 0.0);
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let a = checked_hermitian(h)?;
    let n = a.rows();
    let (mut d, mut e, w) = tridiagonalize(a, true);
    let w = w.expect("vectors requested");
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));

    // V = W · Z, columns permuted into ascending order.
    let mut vecs = ComplexMatrix::zeros(n, n);
    let mut col = vec![C64::default(); n];
    for (out_k, &k) in order.iter().enumerate() {
        for (i, c) in col.iter_mut().enumerate() {
            let wrow = w.row(i);
            *c = (0..n).map(|j| wrow[j] * z[j * n + k]).sum();
        }
        fix_phase(&mut col);
        for (i, c) in col.iter().enumerate() {
            vecs[(i, out_k)] = *c;
        }
    }
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors: vecs })
}

/// Eigenvalues only, ascending. Roughly a third of the cost of [`hermitian_eig`].
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = checked_hermitian(h)?;
    let (mut d, mut e, _) = tridiagonalize(a, false);
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        m.symmetrize();
        m
    }

    fn check_decomposition(h: &ComplexMatrix, tol: f64) {
        let eig = hermitian_eig(h).unwrap();
        let n = h.rows();
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let resid = (&eig.reconstruct() - h).frobenius_norm();
        assert!(resid <= tol * h.frobenius_norm().max(1.0), "reconstruction residual {resid}");
        let v = &eig.eigenvectors;
        let gram = &v.adjoint() * v;
        let ortho = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
        assert!(ortho <= tol * (n as f64).sqrt(), "orthonormality defect {ortho}");
    }

    #[test]
    fn pauli_z() {
        let sz = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let eig = hermitian_eig(&sz).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
        assert!((eig.vector(0)[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn jaynes_cummings_doublet() {
        let g = 0.1;
        let h = ComplexMatrix::from_real(2, 2, &[0.0, g, g, 0.0]).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!((eig.eigenvalues[0] + 0.1).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn random_fifty_by_fifty() {
        check_decomposition(&random_hermitian(50, 7), 1e-9);
    }

    #[test]
    fn random_sizes_and_trace() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (17, 4), (120, 5)] {
            let h = random_hermitian(n, seed);
            check_decomposition(&h, 1e-9);
            let sum: f64 = hermitian_eig(&h).unwrap().eigenvalues.iter().sum();
            assert!((sum - h.trace().re).abs() <= 1e-9 * h.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn already_diagonal_and_degenerate() {
        let h = ComplexMatrix::from_real_diagonal(&[2.0, -1.0, 2.0, 0.0]);
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 0.0, 2.0, 2.0]);
        check_decomposition(&h, 1e-12);
        let zero = ComplexMatrix::zeros(3, 3);
        assert_eq!(hermitian_eig(&zero).unwrap().eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn eigenvalues_only_matches_full() {
        let h = random_hermitian(40, 11);
        let full = hermitian_eig(&h).unwrap().eigenvalues;
        let only = hermitian_eigenvalues(&h).unwrap();
        for (a, b) in full.iter().zip(&only) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&h), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(hermitian_eig(&rect).is_err());
    }

    #[test]
    fn tiny_anti_hermitian_part_is_symmetrized() {
        let mut h = random_hermitian(6, 3);
        h[(0, 1)] += C64::new(1e-13, 0.0);
        assert!(hermitian_eig(&h).is_ok());
    }

    #[test]
    fn deterministic_phase() {
        let h = random_hermitian(12, 9);
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.eigenvectors, b.eigenvectors);
        for k in 0..12 {
            let v = a.vector(k);
            let imax = (0..12).max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm())).unwrap();
            assert!(v[imax].im.abs() < 1e-14 && v[imax].re > 0.0);
        }
    }
}
