//! Dense complex matrices and the decompositions used by the operator and
//! functional-calculus layers (backed by `faer`).

use faer::{Mat, Side};
use num_complex::Complex64;
use std::ops::{Index, IndexMut};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("eigenvalue or singular value iteration did not converge")]
    NoConvergence,
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let product = self.to_faer() * other.to_faer();
        Ok(Matrix::from_faer(&product))
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise distance from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    fn is_real(&self) -> bool {
        self.data.iter().all(|a| a.im == 0.0)
    }

    pub fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub fn from_faer(m: &Mat<Complex64>) -> Matrix {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn to_faer_real(&self) -> Mat<f64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of a Hermitian matrix in increasing order. Only the lower
/// triangle is read. Real symmetric input takes a faster real path.
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>, LinalgError> {
    h.require_square()?;
    let mut values = if h.is_real() {
        h.to_faer_real()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| LinalgError::NoConvergence)?
    } else {
        h.to_faer()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| LinalgError::NoConvergence)?
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigen-decomposition `H = U diag(values) U^*` of a Hermitian matrix.
pub fn hermitian_eigen(h: &Matrix) -> Result<(Vec<f64>, Matrix), LinalgError> {
    h.require_square()?;
    let evd = h
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| LinalgError::NoConvergence)?;
    let n = h.rows;
    let s = evd.S().column_vector();
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let u = evd.U();
    let vectors = Matrix::from_fn(n, n, |i, j| u[(i, j)]);
    Ok((values, vectors))
}

/// `U diag(values) U^*`.
pub fn reassemble(values: &[Complex64], vectors: &Matrix) -> Matrix {
    let n = vectors.rows();
    let scaled = Matrix::from_fn(n, n, |i, j| vectors[(i, j)] * values[j]);
    scaled.matmul(&vectors.adjoint()).expect("square factors")
}

/// Singular values in decreasing order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>, LinalgError> {
    let mut values = m
        .to_faer()
        .singular_values()
        .map_err(|_| LinalgError::NoConvergence)?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Roots of `sum c_k x^k` from the eigenvalues of the companion matrix.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map(|x| x.norm() == 0.0).unwrap_or(false) {
        c.pop();
    }
    let degree = c.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = c[degree];
    let companion = Mat::<Complex64>::from_fn(degree, degree, |i, j| {
        if i == 0 {
            -c[degree - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    companion.eigenvalues().map_err(|_| LinalgError::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal_and_complex_hermitian() {
        let d = Matrix::diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        let h = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(2.0, 0.0),
            (1, 1) => Complex64::new(2.0, 0.0),
            (0, 1) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, -1.0),
        });
        let ev = hermitian_eigenvalues(&h).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        let (values, vectors) = hermitian_eigen(&h).unwrap();
        let back = reassemble(&values.iter().map(|v| Complex64::new(*v, 0.0)).collect::<Vec<_>>(), &vectors);
        assert!(back.sub(&h).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn companion_roots() {
        // (x - 1)(x - 2)(x + 0.5i)
        let c = [
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, -1.5),
            Complex64::new(-3.0, 0.5),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots = polynomial_roots(&c).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - Complex64::new(0.0, -0.5)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((roots[2] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
