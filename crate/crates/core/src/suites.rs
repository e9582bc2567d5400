//! Seeded randomized checks of the identities and inequalities, each
//! summarized as a count of violations and the worst observed defect.

use crate::funcalc::{check_qtrace, heat_trace, FuncalcError};
use crate::indices::{fredholm_index, winding_number, witten_index, IndexError};
use crate::linalg::{self, Matrix};
use crate::operators::{commutator_trace, naive_section_pair, product_sections, OperatorError};
use crate::quadrature::circle::heat_integral;
use crate::quadrature::QuadratureSettings;
use crate::symbol::{omega_form, FourierSymbol, SobolevMethod, SymbolError};
use crate::funcalc::ScalarFunction;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Funcalc(#[from] FuncalcError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    /// Largest defect seen; its meaning depends on the suite (an absolute
    /// error for identities, `lhs - rhs` for inequalities).
    pub worst: f64,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            trials: 0,
            violations: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, defect: f64, violated: bool) {
        self.trials += 1;
        self.worst = self.worst.max(defect);
        if violated {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.trials > 0
    }
}

/// Largest section size the suites refine to.
const MAX_SUITE_SIZE: usize = 1024;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A trigonometric polynomial with coefficients uniform in the unit
/// square at indices `-degree..=degree`.
pub fn random_trig_polynomial<R: Rng>(rng: &mut R, degree: usize) -> Result<FourierSymbol, SymbolError> {
    let d = degree as i64;
    let pairs: Vec<(i64, Complex64)> = (-d..=d).map(|k| (k, unit_complex(rng))).collect();
    FourierSymbol::from_coefficients(&pairs)
}

/// A random trigonometric polynomial of random degree in `1..=max_degree`.
pub fn random_symbol_up_to<R: Rng>(rng: &mut R, max_degree: usize) -> Result<FourierSymbol, SymbolError> {
    let degree = rng.random_range(1..=max_degree.max(1));
    random_trig_polynomial(rng, degree)
}

/// `z^{-shift} prod (z - r_j)` with roots away from the circle, and its
/// winding number `#{|r_j| < 1} - shift`.
pub fn random_factored_polynomial<R: Rng>(rng: &mut R, roots: usize, shift: i64) -> Result<(FourierSymbol, i64), SymbolError> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    let mut inside = 0;
    for _ in 0..roots {
        let radius = if rng.random_bool(0.5) {
            inside += 1;
            rng.random_range(0.1..0.8)
        } else {
            rng.random_range(1.25..3.0)
        };
        let root = Complex64::from_polar(radius, rng.random_range(0.0..std::f64::consts::TAU));
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * root;
        }
        poly = next;
    }
    let pairs: Vec<(i64, Complex64)> = poly.iter().enumerate().map(|(k, c)| (k as i64 - shift, *c)).collect();
    Ok((FourierSymbol::from_coefficients(&pairs)?, inside - shift))
}

/// `G G^*` for an `n x rank` complex Gaussian-like `G`.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Result<Matrix, SuiteError> {
    let g = Matrix::from_fn(n, rank, |_, _| unit_complex(rng));
    Ok(g.matmul(&g.adjoint())?)
}

/// `Tr(A^q - B^q) <= Tr((A - B)^q)` for `A = B + D` with random positive
/// `B` and `D`.
pub fn qtrace_suite(seed: u64, pairs: usize, size: usize) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("qtrace");
    for _ in 0..pairs {
        let q = rng.random_range(0.05..0.95);
        let rank = rng.random_range(1..=size);
        let b = random_psd(&mut rng, size, rank)?;
        let rank = rng.random_range(1..=size);
        let d = random_psd(&mut rng, size, rank)?;
        let a = b.add(&d)?;
        let r = check_qtrace(&a, &b, q)?;
        let slack = 1e-10 * r.rhs.abs().max(1.0);
        report.record(r.lhs - r.rhs, r.lhs > r.rhs + slack);
    }
    Ok(report)
}

/// `||fg||^2 <= 2 ||f||^2 ||g||_inf^2 + 2 ||f||_inf^2 ||g||^2` in the
/// `W^{1/2}` norm, for random trigonometric polynomials.
pub fn krein_algebra_suite(seed: u64, pairs: usize, max_degree: usize) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("krein_algebra");
    for _ in 0..pairs {
        let f = random_symbol_up_to(&mut rng, max_degree)?;
        let g = random_symbol_up_to(&mut rng, max_degree)?;
        let norm = |h: &FourierSymbol| h.sobolev_half_norm(SobolevMethod::Coefficient).powi(2);
        let lhs = norm(&f.multiply(&g));
        let (fs, gs) = (f.sup_norm().powi(2), g.sup_norm().powi(2));
        let rhs = 2.0 * norm(&f) * gs + 2.0 * fs * norm(&g);
        report.record(lhs - rhs, lhs > rhs * (1.0 + 1e-12));
    }
    Ok(report)
}

/// `|Tr([T_f, T_g]) - omega(f, g)|` for random trigonometric polynomials.
pub fn helton_howe_suite(seed: u64, pairs: usize, max_degree: usize, tolerance: f64) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("helton_howe");
    for _ in 0..pairs {
        let f = random_symbol_up_to(&mut rng, max_degree)?;
        let g = random_symbol_up_to(&mut rng, max_degree)?;
        let defect = (commutator_trace(&f, &g)?.trace - omega_form(&f, &g)).norm();
        report.record(defect, defect > tolerance);
    }
    Ok(report)
}

/// Matrix heat trace against the heat integral on random symbols of
/// degree at most `max_degree`, scaled to unit sup norm. The section size
/// doubles until consecutive sizes agree to `tolerance / 100`.
pub fn heat_identity_suite(
    seed: u64,
    symbols: usize,
    max_degree: usize,
    heat: &[f64],
    tolerance: f64,
) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("heat_identity");
    let settings = QuadratureSettings::default();
    for _ in 0..symbols {
        let raw = random_symbol_up_to(&mut rng, max_degree)?;
        let scale = 1.0 / raw.sup_norm();
        let pairs: Vec<(i64, Complex64)> = raw.indexed_coeffs().map(|(k, c)| (k, c * scale)).collect();
        let f = FourierSymbol::from_coefficients(&pairs)?;
        for &s in heat {
            let mut size = 4 * max_degree.max(4);
            let mut matrix = heat_trace(&f, s, size)?;
            while matrix.error > 0.01 * tolerance && size < MAX_SUITE_SIZE {
                size *= 2;
                matrix = heat_trace(&f, s, size)?;
            }
            let integral = heat_integral(&f, s, &settings).map_err(IndexError::from)?.value.re;
            let defect = (matrix.value - integral).abs();
            report.record(defect, defect > tolerance);
        }
    }
    Ok(report)
}

/// Winding numbers of factored polynomials against their root counts.
pub fn winding_suite(seed: u64, symbols: usize) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("winding");
    for _ in 0..symbols {
        let roots = rng.random_range(1..=6);
        let shift = rng.random_range(-2..=2);
        let (f, expected) = random_factored_polynomial(&mut rng, roots, shift)?;
        let got = winding_number(&f, Complex64::new(0.0, 0.0))?;
        let defect = (got - expected).abs() as f64;
        report.record(defect, got != expected);
    }
    Ok(report)
}

/// Witten index equals the Fredholm index for zero-free symbols.
pub fn fredholm_coincidence_suite(seed: u64, symbols: usize) -> Result<SuiteReport, SuiteError> {
    let mut rng = seeded(seed);
    let mut report = SuiteReport::new("fredholm_coincidence");
    let settings = QuadratureSettings::default();
    for _ in 0..symbols {
        let roots = rng.random_range(1..=5);
        let shift = rng.random_range(-2..=2);
        let (f, _) = random_factored_polynomial(&mut rng, roots, shift)?;
        let fredholm = fredholm_index(&f)?.index;
        let witten = witten_index(&f, &settings)?.witten.unwrap_or(f64::NAN);
        let defect = (witten - fredholm as f64).abs();
        report.record(defect, witten.round() as i64 != fredholm || defect > 1e-8);
    }
    Ok(report)
}

/// For the shift, products of finite sections give `Tr(phi(A) - phi(B))
/// = phi(1) - phi(0)` while the naive pair `(T_N^* T_N, T_N T_N^*)` has
/// equal spectra and gives 0. Reports the larger of the two defects.
pub fn index_collapse_guard(phi: &ScalarFunction, size: usize) -> Result<SuiteReport, SuiteError> {
    let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)])?;
    let mut report = SuiteReport::new("index_collapse_guard");
    let expected = phi.value(1.0) - phi.value(0.0);
    let pair = product_sections(&shift, size)?;
    let (a, b) = (linalg::hermitian_eigenvalues(&pair.a)?, linalg::hermitian_eigenvalues(&pair.b)?);
    let product = trace_of(phi, &a, &b)?;
    let (na, nb) = naive_section_pair(&shift, size)?;
    let (na, nb) = (linalg::hermitian_eigenvalues(&na)?, linalg::hermitian_eigenvalues(&nb)?);
    let naive = trace_of(phi, &na, &nb)?;
    let defect = (product - expected).abs().max(naive.abs());
    report.record(defect, defect > 1e-12);
    Ok(report)
}

fn trace_of(phi: &ScalarFunction, a: &[f64], b: &[f64]) -> Result<f64, FuncalcError> {
    let norm = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs()));
    let fa = phi.apply_to_spectrum(a, norm)?;
    let fb = phi.apply_to_spectrum(b, norm)?;
    Ok(fa.iter().sum::<f64>() - fb.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        assert!(qtrace_suite(1, 10, 6).unwrap().passed());
        assert!(krein_algebra_suite(2, 10, 6).unwrap().passed());
        assert!(helton_howe_suite(3, 5, 8, 1e-10).unwrap().passed());
        assert!(winding_suite(4, 10).unwrap().passed());
        assert!(index_collapse_guard(&ScalarFunction::Power { p: 0.5 }, 16).unwrap().passed());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_trig_polynomial(&mut seeded(9), 4).unwrap();
        let b = random_trig_polynomial(&mut seeded(9), 4).unwrap();
        assert_eq!(a.coeff(3), b.coeff(3));
    }
}
