//! Scalar functions applied to Hermitian matrices, and the matrix side of
//! the trace formulas.

pub mod inequalities;
pub mod monotone;
pub mod trace;

pub use inequalities::{check_qtrace, perturbation_log_trace};
pub use monotone::{om_resolvent_trace, OperatorMonotone};
pub use trace::{heat_trace, pair_spectrum, trace_phi_difference, PairSpectrum, TraceEstimate};

use crate::linalg::{self, LinalgError, Matrix};
use crate::operators::OperatorError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Relative threshold below which negative eigenvalues are clipped to 0
/// for fractional powers.
pub const NEGATIVE_CLIP: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuncalcError {
    #[error("eigenvalue {value} is outside the domain of the function (matrix norm {norm})")]
    NegativeEigenvalue { value: f64, norm: f64 },
    #[error("difference of the pair is not positive semidefinite (smallest eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("resolvent integral tail does not converge: {0}")]
    DivergentTail(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Symbol(#[from] crate::symbol::SymbolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Holomorphic,
    W1,
    OpMonotone,
}

/// Caller-supplied function with its derivative.
#[derive(Clone)]
pub struct CustomFunction {
    pub name: String,
    pub value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub smoothness: Smoothness,
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFunction({})", self.name)
    }
}

impl PartialEq for CustomFunction {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.value, &other.value)
    }
}

/// Real function applied through the spectral calculus. Configured in JSON
/// as e.g. `{"variant": "power", "p": 0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarFunction {
    /// `x^p`.
    Power { p: f64 },
    /// `e^{-s x}`.
    ExpHeat { s: f64 },
    /// `sum c_k x^k`.
    Polynomial { coefficients: Vec<f64> },
    /// `x / (lambda + x)`.
    Resolvent { lambda: f64 },
    #[serde(skip)]
    Custom(CustomFunction),
}

impl ScalarFunction {
    pub fn validate(&self) -> Result<(), FuncalcError> {
        let ok = match self {
            ScalarFunction::Power { p } => p.is_finite() && *p > 0.0,
            ScalarFunction::ExpHeat { s } => s.is_finite() && *s >= 0.0,
            ScalarFunction::Polynomial { coefficients } => {
                !coefficients.is_empty() && coefficients.iter().all(|c| c.is_finite())
            }
            ScalarFunction::Resolvent { lambda } => lambda.is_finite() && *lambda > 0.0,
            ScalarFunction::Custom(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(FuncalcError::InvalidFunction(format!("{self:?}")))
        }
    }

    pub fn label(&self) -> String {
        match self {
            ScalarFunction::Power { p } => format!("x^{p}"),
            ScalarFunction::ExpHeat { s } => format!("exp(-{s} x)"),
            ScalarFunction::Polynomial { coefficients } => format!("polynomial{coefficients:?}"),
            ScalarFunction::Resolvent { lambda } => format!("x/({lambda}+x)"),
            ScalarFunction::Custom(c) => c.name.clone(),
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            ScalarFunction::Power { p } if *p < 1.0 => Smoothness::OpMonotone,
            ScalarFunction::Power { p } if p.fract() != 0.0 => Smoothness::W1,
            ScalarFunction::Resolvent { .. } => Smoothness::OpMonotone,
            ScalarFunction::Custom(c) => c.smoothness,
            _ => Smoothness::Holomorphic,
        }
    }

    /// True for powers with non-integer exponent, whose derivatives blow up
    /// at 0 and which are undefined for negative arguments.
    pub fn is_fractional_power(&self) -> bool {
        matches!(self, ScalarFunction::Power { p } if p.fract() != 0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Power { p } => {
                if p.fract() == 0.0 {
                    x.powi(*p as i32)
                } else {
                    x.max(0.0).powf(*p)
                }
            }
            ScalarFunction::ExpHeat { s } => (-s * x).exp(),
            ScalarFunction::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            ScalarFunction::Resolvent { lambda } => x / (lambda + x),
            ScalarFunction::Custom(c) => (c.value)(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Power { p } => {
                if *p == 1.0 {
                    1.0
                } else if p.fract() == 0.0 {
                    p * x.powi(*p as i32 - 1)
                } else {
                    p * x.max(0.0).powf(p - 1.0)
                }
            }
            ScalarFunction::ExpHeat { s } => -s * (-s * x).exp(),
            ScalarFunction::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c),
            ScalarFunction::Resolvent { lambda } => lambda / (lambda + x).powi(2),
            ScalarFunction::Custom(c) => (c.derivative)(x),
        }
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value(0.0)
    }

    /// `phi(x) - phi(0)` without cancellation for small `x`.
    pub fn increment_from_zero(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::ExpHeat { s } => (-s * x).exp_m1(),
            ScalarFunction::Polynomial { coefficients } => {
                coefficients.iter().skip(1).rev().fold(0.0, |acc, c| acc * x + c) * x
            }
            _ => self.value(x) - self.value_at_zero(),
        }
    }

    /// Whether `phi'` stays bounded near 0.
    pub fn has_bounded_derivative_at_zero(&self) -> bool {
        !matches!(self, ScalarFunction::Power { p } if *p < 1.0)
    }

    /// `sup |phi'|` on `[0, upper]`, infinite when unbounded.
    pub fn lipschitz_bound(&self, upper: f64) -> f64 {
        match self {
            ScalarFunction::Power { p } if *p < 1.0 => f64::INFINITY,
            ScalarFunction::Power { p } => p * upper.max(0.0).powf(p - 1.0),
            ScalarFunction::ExpHeat { s } => *s,
            ScalarFunction::Resolvent { lambda } => 1.0 / lambda,
            _ => {
                let n = 256;
                (0..=n)
                    .map(|k| self.derivative(upper * k as f64 / n as f64).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Applies the function to a list of eigenvalues of a PSD matrix with
    /// norm `norm`, clipping rounding-level negatives for fractional powers.
    pub fn apply_to_spectrum(&self, eigenvalues: &[f64], norm: f64) -> Result<Vec<f64>, FuncalcError> {
        let fractional = self.is_fractional_power();
        let floor = 64.0 * f64::EPSILON * eigenvalues.len().max(1) as f64 * norm;
        eigenvalues
            .iter()
            .map(|&x| {
                if fractional {
                    if x < -NEGATIVE_CLIP * norm.max(f64::MIN_POSITIVE) {
                        return Err(FuncalcError::NegativeEigenvalue { value: x, norm });
                    }
                    if x < floor {
                        return Ok(self.value(0.0));
                    }
                }
                Ok(self.value(x))
            })
            .collect()
    }
}

/// `U phi(Lambda) U^*` for Hermitian `H = U Lambda U^*`.
pub fn matrix_function(h: &Matrix, phi: &ScalarFunction) -> Result<Matrix, FuncalcError> {
    phi.validate()?;
    let (values, vectors) = linalg::hermitian_eigen(h)?;
    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if phi.is_fractional_power() && values.iter().any(|v| *v < 0.0 && *v >= -NEGATIVE_CLIP * norm) {
        log::warn!("clipping small negative eigenvalues to 0 before applying {}", phi.label());
    }
    let mapped = phi.apply_to_spectrum(&values, norm)?;
    let mapped: Vec<Complex64> = mapped.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    Ok(linalg::reassemble(&mapped, &vectors))
}

/// Compensated (Neumaier) summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_heat() {
        let h = Matrix::from_fn(2, 2, |i, j| Complex64::new(if i == j { 2.0 } else { 0.5 }, 0.0));
        let same = matrix_function(&h, &ScalarFunction::Power { p: 1.0 }).unwrap();
        assert!(same.sub(&h).unwrap().max_abs() < 1e-14);
        let d = Matrix::diagonal(&[0.0, 1.0]);
        let e = matrix_function(&d, &ScalarFunction::ExpHeat { s: 3.0 }).unwrap();
        assert!((e[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((e[(1, 1)].re - (-3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn negative_eigenvalues_rejected_for_roots() {
        let d = Matrix::diagonal(&[-0.5, 1.0]);
        assert!(matches!(
            matrix_function(&d, &ScalarFunction::Power { p: 0.5 }),
            Err(FuncalcError::NegativeEigenvalue { .. })
        ));
        let tiny = Matrix::diagonal(&[-1e-13, 1.0]);
        let r = matrix_function(&tiny, &ScalarFunction::Power { p: 0.5 }).unwrap();
        assert_eq!(r[(0, 0)].re, 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let functions = [
            ScalarFunction::Power { p: 2.5 },
            ScalarFunction::ExpHeat { s: 2.0 },
            ScalarFunction::Polynomial { coefficients: vec![1.0, -2.0, 0.5, 3.0] },
            ScalarFunction::Resolvent { lambda: 0.7 },
        ];
        for phi in &functions {
            for k in 1..=10 {
                let x = k as f64 / 10.0;
                let h = 1e-6;
                let fd = (phi.value(x + h) - phi.value(x - h)) / (2.0 * h);
                let d = phi.derivative(x);
                assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{phi:?} at {x}");
            }
        }
    }

    #[test]
    fn config_form() {
        let phi: ScalarFunction = serde_json::from_str(r#"{"variant":"power","p":1.0}"#).unwrap();
        assert_eq!(phi, ScalarFunction::Power { p: 1.0 });
        assert!(serde_json::from_str::<ScalarFunction>(r#"{"variant":"power","p":1.0,"q":2}"#).is_err());
    }
}
