//! Finite sections of Toeplitz, Hankel and product operators.
//!
//! The key point is that `A = T_f^* T_f` and `B = T_f T_f^*` are built as
//! sections of the infinite products, via
//! `T_f^* T_f = T_{|f|^2} - H_f^* H_f` and `T_f T_f^* = T_{|f|^2} - H_{conj f}^* H_{conj f}`,
//! not as products of finite Toeplitz matrices (whose index is always 0).

pub mod dump;

use crate::linalg::{self, LinalgError, Matrix};
use crate::symbol::{FourierSymbol, SobolevMethod};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("section size {size} is below the symbol degree {degree}")]
    SizeBelowDegree { size: usize, degree: usize },
    #[error("section size must be positive")]
    EmptySection,
    #[error("Schatten exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `N x N` section of `T_f`: entry `(j, k)` is `f(j - k)`.
pub fn toeplitz_section(f: &FourierSymbol, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |j, k| f.coeff(j as i64 - k as i64))
}

/// `rows x cols` section of `H_f`: entry `(m, k)` is `f(-(m + 1) - k)`.
pub fn hankel_section(f: &FourierSymbol, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |m, k| f.coeff(-(m as i64 + 1) - k as i64))
}

/// Sections `A_N` of `T_f^* T_f` and `B_N` of `T_f T_f^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPair {
    pub a: Matrix,
    pub b: Matrix,
    /// True when the symbol's coefficient data are exact, so the pair is
    /// the exact compression of the infinite operators.
    pub exact: bool,
}

impl SectionPair {
    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// `A_N - B_N`, the section of the self-commutator.
    pub fn difference(&self) -> Matrix {
        self.a.sub(&self.b).expect("sections share their size")
    }
}

/// The symbol `|f|^2`.
fn modulus_squared(f: &FourierSymbol) -> FourierSymbol {
    f.multiply(&f.conj())
}

/// Section of `H_u^* H_v` (with `H_u` entries `u(-(m+1)-k)`), computed from
/// the finite convolution sums. Nonzero only where both Hankel columns are.
fn hankel_gram(u: &FourierSymbol, v: &FourierSymbol, n: usize) -> Matrix {
    let reach_u = (-u.min_index()).max(0) as usize;
    let reach_v = (-v.min_index()).max(0) as usize;
    let mut out = Matrix::zeros(n, n);
    for j in 0..reach_u.min(n) {
        for k in 0..reach_v.min(n) {
            let depth = (reach_u - j).min(reach_v - k);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..depth {
                let idx_j = -(m as i64 + 1) - j as i64;
                let idx_k = -(m as i64 + 1) - k as i64;
                acc += u.coeff(idx_j).conj() * v.coeff(idx_k);
            }
            out[(j, k)] = acc;
        }
    }
    out
}

/// Exact sections of `A = T_f^* T_f` and `B = T_f T_f^*` for a symbol with
/// finitely many coefficients. Refuses `n` below the symbol degree.
pub fn product_sections(f: &FourierSymbol, n: usize) -> Result<SectionPair, OperatorError> {
    if n == 0 {
        return Err(OperatorError::EmptySection);
    }
    let degree = f.degree();
    if n < degree {
        return Err(OperatorError::SizeBelowDegree { size: n, degree });
    }
    let base = toeplitz_section(&modulus_squared(f), n);
    let fbar = f.conj();
    let a = base.sub(&hankel_gram(f, f, n))?;
    let b = base.sub(&hankel_gram(&fbar, &fbar, n))?;
    Ok(SectionPair {
        a: hermitize(a),
        b: hermitize(b),
        exact: f.is_exact(),
    })
}

/// Averages a matrix with its adjoint to remove rounding asymmetry.
fn hermitize(m: Matrix) -> Matrix {
    let n = m.rows();
    Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

/// The naive pair `(T_N^* T_N, T_N T_N^*)` built from a finite Toeplitz
/// section. Kept to document why [`product_sections`] exists: its trace
/// difference under any function is always zero.
pub fn naive_section_pair(f: &FourierSymbol, n: usize) -> Result<(Matrix, Matrix), OperatorError> {
    let t = toeplitz_section(f, n);
    let ta = t.adjoint();
    Ok((hermitize(ta.matmul(&t)?), hermitize(t.matmul(&ta)?)))
}

/// Section of the self-commutator `T_f^* T_f - T_f T_f^*`.
pub fn self_commutator(f: &FourierSymbol, n: usize) -> Result<Matrix, OperatorError> {
    Ok(product_sections(f, n)?.difference())
}

/// Section of `[T_f, T_g] = H_{conj g}^* H_f - H_{conj f}^* H_g`.
pub fn commutator(f: &FourierSymbol, g: &FourierSymbol, n: usize) -> Result<Matrix, OperatorError> {
    if n == 0 {
        return Err(OperatorError::EmptySection);
    }
    let first = hankel_gram(&g.conj(), f, n);
    let second = hankel_gram(&f.conj(), g, n);
    Ok(first.sub(&second)?)
}

/// Trace of the commutator with the norm bound `||f||_{W^1/2} ||g||_{W^1/2}`
/// on its trace norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorTrace {
    pub trace: Complex64,
    pub bound: f64,
}

pub fn commutator_trace(f: &FourierSymbol, g: &FourierSymbol) -> Result<CommutatorTrace, OperatorError> {
    let n = (f.degree() + g.degree()).max(1);
    let c = commutator(f, g, n)?;
    Ok(CommutatorTrace {
        trace: c.trace(),
        bound: f.sobolev_half_norm(SobolevMethod::Coefficient) * g.sobolev_half_norm(SobolevMethod::Coefficient),
    })
}

/// `Tr(T_h [T_f, T_g])`. The commutator of finite-degree symbols vanishes
/// outside its leading `d_f + d_g` block, so that section is exact.
pub fn weighted_commutator_trace(h: &FourierSymbol, f: &FourierSymbol, g: &FourierSymbol) -> Result<Complex64, OperatorError> {
    let n = (f.degree() + g.degree()).max(1);
    let c = commutator(f, g, n)?;
    Ok(toeplitz_section(h, n).matmul(&c)?.trace())
}

pub fn singular_values(m: &Matrix) -> Result<Vec<f64>, OperatorError> {
    Ok(linalg::singular_values(m)?)
}

/// `(sum s_n^p)^{1/p}` over the singular values.
pub fn schatten_norm(m: &Matrix, p: f64) -> Result<f64, OperatorError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(OperatorError::InvalidExponent(p));
    }
    let s = linalg::singular_values(m)?;
    Ok(s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p))
}
