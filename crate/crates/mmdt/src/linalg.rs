//! Small dense linear algebra used throughout the crate.
//!
//! Everything here works on row-major `f64` storage. The sizes involved are
//! desk scale (hundreds to a few thousand rows), so the implementations favor
//! clarity and determinism over blocking or parallelism.

use serde::{Deserialize, Serialize};

use crate::error::{MmdtError, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(MmdtError::validation(format!(
                    "row {i} has {} columns, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MmdtError::validation(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Matrix-vector product `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &o) in dst.iter_mut().zip(orow) {
                    *d += a * o;
                }
            }
        }
        out
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
pub fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Inverse of a small square matrix by Gauss-Jordan elimination with
/// partial pivoting.
pub fn invert(m: &DenseMatrix) -> Result<DenseMatrix> {
    if m.rows != m.cols {
        return Err(MmdtError::validation("cannot invert a non-square matrix"));
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut inv = DenseMatrix::identity(n).data;

    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[pivot * n + col].abs() {
                pivot = r;
            }
        }
        if a[pivot * n + col].abs() < 1e-12 {
            return Err(MmdtError::validation(
                "matrix is singular to working precision",
            ));
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r * n + j] -= f * a[col * n + j];
                inv[r * n + j] -= f * inv[col * n + j];
            }
        }
    }
    DenseMatrix::from_vec(n, n, inv)
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method.
///
/// Returns eigenvalues in ascending order. Input symmetry is assumed, not
/// checked; callers pass Gram matrices.
pub fn symmetric_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.data.clone();
    if n <= 1 {
        return a;
    }

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// 2-norm condition number via singular values (eigenvalues of `AᵀA`).
pub fn condition_number(m: &DenseMatrix) -> f64 {
    let gram = m.transpose().matmul(m);
    let eig = symmetric_eigenvalues(&gram);
    let max = eig.last().copied().unwrap_or(0.0).max(0.0);
    let min = eig.first().copied().unwrap_or(0.0).max(0.0);
    if min <= 0.0 {
        return f64::INFINITY;
    }
    (max / min).sqrt()
}

/// Orthonormalizes the columns of a square matrix in place using modified
/// Gram-Schmidt. Errors if the columns are numerically dependent.
pub fn orthonormalize_columns(m: &mut DenseMatrix) -> Result<()> {
    let n = m.rows;
    assert_eq!(n, m.cols);
    for j in 0..n {
        for k in 0..j {
            let mut proj = 0.0;
            for i in 0..n {
                proj += m.get(i, j) * m.get(i, k);
            }
            for i in 0..n {
                let v = m.get(i, j) - proj * m.get(i, k);
                m.set(i, j, v);
            }
        }
        let mut nrm = 0.0;
        for i in 0..n {
            nrm += m.get(i, j) * m.get(i, j);
        }
        let nrm = nrm.sqrt();
        if nrm < 1e-10 {
            return Err(MmdtError::validation(
                "degenerate random matrix during orthonormalization",
            ));
        }
        for i in 0..n {
            let v = m.get(i, j) / nrm;
            m.set(i, j, v);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_dot() {
        let m = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(m.matvec(&[3.0, 1.0]), vec![6.0, 1.0]);
        assert_eq!(dot(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]), 32.0);
    }

    #[test]
    fn inverse_recovers_identity() {
        let a = DenseMatrix::from_rows(&[
            vec![4.0, 7.0, 1.0],
            vec![2.0, 6.0, 0.5],
            vec![1.0, -1.0, 3.0],
        ])
        .unwrap();
        let inv = invert(&a).unwrap();
        let prod = a.matmul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(invert(&a).is_err());
    }

    #[test]
    fn condition_number_of_simple_matrices() {
        assert!((condition_number(&DenseMatrix::identity(4)) - 1.0).abs() < 1e-9);

        let d = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((condition_number(&d) - 2.0).abs() < 1e-9);

        let ang: f64 = 0.7;
        let rot = DenseMatrix::from_rows(&[
            vec![ang.cos(), -ang.sin()],
            vec![ang.sin(), ang.cos()],
        ])
        .unwrap();
        assert!((condition_number(&rot) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn jacobi_eigenvalues_diag() {
        let m = DenseMatrix::from_rows(&[
            vec![3.0, 1.0, 0.0],
            vec![1.0, 3.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ])
        .unwrap();
        let eig = symmetric_eigenvalues(&m);
        let expect = [2.0, 4.0, 5.0];
        for (e, x) in eig.iter().zip(expect) {
            assert!((e - x).abs() < 1e-10, "{eig:?}");
        }
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let mut m = DenseMatrix::from_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        orthonormalize_columns(&mut m).unwrap();
        let gram = m.transpose().matmul(&m);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram.get(i, j) - expect).abs() < 1e-10);
            }
        }
    }
}
