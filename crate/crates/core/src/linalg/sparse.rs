use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Compressed sparse row matrix. Used where operators are applied many times
/// (integrator right-hand sides, Lanczos).
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Keeps entries whose magnitude is strictly positive.
    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(m.rows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..m.rows() {
            for (j, &z) in m.row(i).iter().enumerate() {
                if z.re != 0.0 || z.im != 0.0 {
                    col_idx.push(j);
                    values.push(z);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { rows: m.rows(), cols: m.cols(), row_ptr, col_idx, values }
    }

    /// Builds from entries sorted by (row, col) with no duplicates; explicit
    /// zeros are dropped.
    pub fn from_sorted_triplets(rows: usize, cols: usize, entries: Vec<(usize, usize, C64)>) -> Self {
        let mut row_ptr = vec![0; rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            debug_assert!(i < rows && j < cols);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { rows, cols, row_ptr, col_idx, values }
    }

    /// Copy with every stored value multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    /// Diagonal entries (zeros where absent).
    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.row_entries(i).filter(|&(j, _)| j == i).map(|(_, v)| v).sum())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[(i, self.col_idx[k])] += self.values[k];
            }
        }
        out
    }

    #[inline]
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn mul_vec_into(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_entries(i).map(|(j, a)| a * x[j]).sum();
        }
    }

    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "sparse {}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![C64::default(); self.rows];
        self.mul_vec_into(x, &mut y);
        Ok(y)
    }

    /// out = self · dense, overwriting `out`.
    pub fn mul_dense_into(&self, dense: &ComplexMatrix, out: &mut ComplexMatrix) {
        debug_assert_eq!(dense.rows(), self.cols);
        let n = dense.cols();
        let src = dense.as_slice();
        let dst = out.as_mut_slice();
        for i in 0..self.rows {
            let orow = &mut dst[i * n..(i + 1) * n];
            orow.fill(C64::default());
            for (j, a) in self.row_entries(i) {
                let srow = &src[j * n..(j + 1) * n];
                for (o, &b) in orow.iter_mut().zip(srow) {
                    *o += a * b;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_roundtrip_and_products() {
        let m = ComplexMatrix::from_vec(
            2,
            3,
            vec![
                C64::new(1.0, 0.0),
                C64::default(),
                C64::new(0.0, 2.0),
                C64::default(),
                C64::new(-3.0, 1.0),
                C64::default(),
            ],
        )
        .unwrap();
        let s = CsrMatrix::from_dense(&m);
        assert_eq!(s.nnz(), 3);
        assert_eq!(s.to_dense(), m);
        let x = vec![C64::new(1.0, 1.0), C64::new(2.0, 0.0), C64::new(0.0, -1.0)];
        assert_eq!(s.mul_vec(&x).unwrap(), m.mul_vec(&x).unwrap());
        let d = ComplexMatrix::from_fn(3, 2, |i, j| C64::new(i as f64, j as f64));
        let mut out = ComplexMatrix::zeros(2, 2);
        s.mul_dense_into(&d, &mut out);
        assert_eq!(out, &m * &d);
        assert!(s.mul_vec(&x[..2]).is_err());
    }
}
