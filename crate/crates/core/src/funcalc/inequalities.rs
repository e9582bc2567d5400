//! The trace inequality `Tr(A^q - B^q) <= Tr((A - B)^q)` and the log-det
//! perturbation function behind it.

use super::{compensated_sum, FuncalcError, ScalarFunction, NEGATIVE_CLIP};
use crate::linalg::{self, Matrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QTrace {
    /// `Tr(A^q - B^q)`.
    pub lhs: f64,
    /// `Tr((A - B)^q)`.
    pub rhs: f64,
}

/// Eigenvalues of `A - B`, rejecting differences that are not PSD.
fn psd_difference(a: &Matrix, b: &Matrix) -> Result<(Matrix, Vec<f64>), FuncalcError> {
    let d = a.sub(b).map_err(FuncalcError::Linalg)?;
    let values = linalg::hermitian_eigenvalues(&d)?;
    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min = values.first().copied().unwrap_or(0.0);
    if min < -NEGATIVE_CLIP * norm.max(1.0) {
        return Err(FuncalcError::NotPositive { min_eigenvalue: min });
    }
    Ok((d, values))
}

fn power_trace(values: &[f64], q: f64) -> Result<f64, FuncalcError> {
    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mapped = ScalarFunction::Power { p: q }.apply_to_spectrum(values, norm)?;
    Ok(compensated_sum(mapped))
}

pub fn check_qtrace(a: &Matrix, b: &Matrix, q: f64) -> Result<QTrace, FuncalcError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(FuncalcError::InvalidFunction(format!("exponent must lie in (0, 1), got {q}")));
    }
    let (_, d) = psd_difference(a, b)?;
    let (ea, eb) = rayon::join(|| linalg::hermitian_eigenvalues(a), || linalg::hermitian_eigenvalues(b));
    Ok(QTrace {
        lhs: power_trace(&ea?, q)? - power_trace(&eb?, q)?,
        rhs: power_trace(&d, q)?,
    })
}

/// `Tr log(1 + D^{1/2} (lambda + B)^{-1} D^{1/2})` with `D = A - B`.
pub fn perturbation_log_trace(a: &Matrix, b: &Matrix, lambda: f64) -> Result<f64, FuncalcError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(FuncalcError::InvalidFunction(format!("lambda must be positive, got {lambda}")));
    }
    let (d, _) = psd_difference(a, b)?;
    let root = super::matrix_function(&hermitian_part(&d), &ScalarFunction::Power { p: 0.5 })?;
    let (eb, ub) = linalg::hermitian_eigen(b)?;
    let inverse: Vec<Complex64> = eb.iter().map(|v| Complex64::new(1.0 / (lambda + v), 0.0)).collect();
    let resolvent = linalg::reassemble(&inverse, &ub);
    let inner = root.matmul(&resolvent)?.matmul(&root)?;
    let m = hermitian_part(&Matrix::identity(a.rows()).add(&inner)?);
    let values = linalg::hermitian_eigenvalues(&m)?;
    Ok(compensated_sum(values.iter().map(|v| v.ln())))
}

fn hermitian_part(m: &Matrix) -> Matrix {
    let n = m.rows();
    Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_difference() {
        let b = Matrix::diagonal(&[0.5, 2.0]);
        assert_eq!(perturbation_log_trace(&b, &b, 1.0).unwrap(), 0.0);
        let r = check_qtrace(&b, &Matrix::zeros(2, 2), 0.5).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-15);
    }

    #[test]
    fn rank_one_projection() {
        let a = Matrix::identity(5);
        let mut b = Matrix::identity(5);
        b[(0, 0)] = Complex64::new(0.0, 0.0);
        for lambda in [0.1, 1.0, 7.0] {
            let h = perturbation_log_trace(&a, &b, lambda).unwrap();
            assert!((h - (1.0 + 1.0 / lambda).ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_indefinite_difference() {
        let a = Matrix::diagonal(&[1.0, 0.0]);
        let b = Matrix::diagonal(&[0.0, 1.0]);
        assert!(matches!(check_qtrace(&a, &b, 0.5), Err(FuncalcError::NotPositive { .. })));
    }
}
