//! Symbols on the unit circle: Fourier data, closed-form families,
//! calculus, extensions to the disk and circle-zero profiles.

pub mod family;
pub mod spec;
pub mod zeros;

pub use family::{DiskPoint, Root, SymbolFamily};
pub use spec::SymbolSpec;

use crate::jet::Jet;
use family::Decay;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Default truncation degree for families with infinite Fourier series.
pub const DEFAULT_TRUNCATION_DEGREE: usize = 256;
/// Default number of circle sample points.
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("a symbol needs at least one coefficient")]
    EmptyCoefficients,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rational symbol has a pole on the unit circle at {at}")]
    PoleOnCircle { at: Complex64 },
    #[error("symbol has nonzero negative Fourier coefficients, so it has no holomorphic extension")]
    NotAnalytic,
    #[error("point {z} is not inside the open unit disk")]
    OutsideDisk { z: Complex64 },
    #[error("zero at t = {location} is not of power type")]
    UnprofiledZero { location: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    #[default]
    Raw,
    Fejer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub degree: usize,
    #[serde(default)]
    pub mode: TruncationMode,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            degree: DEFAULT_TRUNCATION_DEGREE,
            mode: TruncationMode::Raw,
        }
    }
}

/// A circle zero `t_j` with `|f(t)|^2 = |t - t_j|^order h(t)` and
/// `f'(t)/f(t) = g(t)/(t - t_j)` inside `|t - t_j| < window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroProfile {
    pub location: f64,
    pub order: f64,
    pub g_value: Complex64,
    pub h_value: f64,
    pub window: f64,
}

/// Closed-form evaluator attached to a symbol: the `t_derivative`-th
/// derivative in `t` of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluator {
    pub family: SymbolFamily,
    pub t_derivative: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevMethod {
    Coefficient,
    DoubleIntegral,
}

/// A function on the circle stored as Fourier coefficients on an index
/// range, optionally backed by a closed-form evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    lo: i64,
    coeffs: Vec<Complex64>,
    evaluator: Option<Evaluator>,
    truncation: Option<Truncation>,
    residual_bound: f64,
}

impl FourierSymbol {
    /// Exact symbol with the given `(index, coefficient)` pairs. Repeated
    /// indices are summed.
    pub fn from_coefficients(pairs: &[(i64, Complex64)]) -> Result<Self, SymbolError> {
        if pairs.is_empty() {
            return Err(SymbolError::EmptyCoefficients);
        }
        if pairs.iter().any(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SymbolError::InvalidParameter("non-finite coefficient".into()));
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (n, c) in pairs {
            coeffs[(n - lo) as usize] += c;
        }
        Ok(FourierSymbol {
            lo,
            coeffs,
            evaluator: None,
            truncation: None,
            residual_bound: 0.0,
        })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real_coefficients(pairs: &[(i64, f64)]) -> Result<Self, SymbolError> {
        let pairs: Vec<(i64, Complex64)> = pairs.iter().map(|(n, c)| (*n, Complex64::new(*c, 0.0))).collect();
        FourierSymbol::from_coefficients(&pairs)
    }

    /// Builds the degree-`degree` truncation of a family, keeping the
    /// closed form as evaluator.
    pub fn from_family(family: SymbolFamily, degree: usize, mode: TruncationMode) -> Result<Self, SymbolError> {
        family.validate()?;
        let d = degree as i64;
        let (lo, mut coeffs, mut residual) = match family.exact_coefficients(degree) {
            Some((lo, coeffs)) => {
                let residual = match family.decay() {
                    Decay::Finite { lo: flo, hi: fhi } if flo >= -d && fhi <= d => 0.0,
                    Decay::Finite { .. } => family_tail_from_fft(&family, degree),
                    Decay::Power { exponent } => {
                        let last = coeffs.last().map(|c| c.norm()).unwrap_or(0.0);
                        last * d as f64 / (exponent - 1.0)
                    }
                    _ => family_tail_from_fft(&family, degree),
                };
                (lo, coeffs, residual)
            }
            None => fft_coefficients(&family, degree),
        };
        if mode == TruncationMode::Fejer {
            for (j, c) in coeffs.iter_mut().enumerate() {
                let k = (lo + j as i64).unsigned_abs() as f64;
                let weight = (1.0 - k / (d as f64 + 1.0)).max(0.0);
                residual += (1.0 - weight) * c.norm();
                *c *= weight;
            }
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(FourierSymbol {
            lo,
            coeffs,
            evaluator: Some(Evaluator {
                family,
                t_derivative: 0,
            }),
            truncation: Some(Truncation { degree, mode }),
            residual_bound: residual,
        })
    }

    /// Lowest stored index.
    pub fn min_index(&self) -> i64 {
        self.lo
    }

    /// Highest stored index.
    pub fn max_index(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// `max |n|` over stored indices with nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.indexed_coeffs()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < self.lo {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get((n - self.lo) as usize).copied().unwrap_or_default()
    }

    pub fn indexed_coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(j, c)| (self.lo + j as i64, *c))
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.evaluator.as_ref()
    }

    /// The underlying family when the symbol is a family itself (not a
    /// derivative of one).
    pub fn family(&self) -> Option<&SymbolFamily> {
        self.evaluator
            .as_ref()
            .filter(|e| e.t_derivative == 0)
            .map(|e| &e.family)
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// Estimated `sum_{|n| > d} |f(n)|` plus the Fejer smoothing defect.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    /// True when the coefficient data represent the symbol exactly.
    pub fn is_exact(&self) -> bool {
        self.residual_bound == 0.0
    }

    /// Drops the evaluator, keeping only the coefficient data.
    pub fn truncated(&self) -> FourierSymbol {
        FourierSymbol {
            lo: self.lo,
            coeffs: self.coeffs.clone(),
            evaluator: None,
            truncation: None,
            residual_bound: 0.0,
        }
    }

    /// Whether the symbol extends holomorphically to the disk.
    pub fn is_analytic(&self) -> bool {
        match self.family() {
            Some(f) => f.is_analytic(),
            None => self.indexed_coeffs().all(|(n, c)| n >= 0 || c.norm() == 0.0),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `f(t)`, from the closed form when available.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        match &self.evaluator {
            Some(e) => e.family.circle_jet(t, e.t_derivative).derivative(e.t_derivative),
            None => self.series_value(t),
        }
    }

    /// `(f(t), f'(t))`.
    pub fn evaluate_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        match &self.evaluator {
            Some(e) => {
                let jet = e.family.circle_jet(t, e.t_derivative + 1);
                (jet.derivative(e.t_derivative), jet.derivative(e.t_derivative + 1))
            }
            None => (self.series_value(t), self.series_derivative_value(t, 1)),
        }
    }

    /// `k`-th derivative of `f` at `t`.
    pub fn derivative_value(&self, t: f64, k: usize) -> Complex64 {
        match &self.evaluator {
            Some(e) => e.family.circle_jet(t, e.t_derivative + k).derivative(e.t_derivative + k),
            None => self.series_derivative_value(t, k),
        }
    }

    /// Value of the stored Fourier series at `t`.
    pub fn series_value(&self, t: f64) -> Complex64 {
        self.series_derivative_value(t, 0)
    }

    /// `k`-th derivative of the stored Fourier series.
    pub fn series_derivative_value(&self, t: f64, k: usize) -> Complex64 {
        let w = Complex64::from_polar(1.0, t);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            let n = self.lo + j as i64;
            let factor = if k == 0 { *c } else { c * (Complex64::i() * n as f64).powu(k as u32) };
            acc = acc * w + factor;
        }
        acc * Complex64::from_polar(1.0, self.lo as f64 * t)
    }

    /// Values of the Fourier series at `t_j = 2 pi j / m`, by FFT.
    pub fn grid_values(&self, m: usize) -> Vec<Complex64> {
        if (self.coeffs.len()) > m {
            return (0..m).map(|j| self.series_value(2.0 * PI * j as f64 / m as f64)).collect();
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (n, c) in self.indexed_coeffs() {
            buf[n.rem_euclid(m as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }

    /// Values of `f` (closed form when available) on the uniform grid.
    pub fn sample(&self, m: usize) -> Vec<Complex64> {
        match &self.evaluator {
            Some(_) => (0..m).map(|j| self.evaluate(2.0 * PI * j as f64 / m as f64)).collect(),
            None => self.grid_values(m),
        }
    }

    /// Upper estimate of `sup |f|` from a dense grid refined near its
    /// largest sample.
    pub fn sup_norm(&self) -> f64 {
        let m = DEFAULT_GRID.max(16 * (self.degree() + 1)).next_power_of_two();
        let values = self.sample(m);
        let (j, grid_max) = values
            .iter()
            .map(|v| v.norm())
            .enumerate()
            .fold((0, 0.0), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
        let h = 2.0 * PI / m as f64;
        let t = j as f64 * h;
        let refined = golden_max(|s| self.evaluate(s).norm(), t - h, t + h);
        grid_max.max(refined) * (1.0 + 1e-12)
    }

    /// The symbol `f'` with coefficients `i n f(n)`.
    pub fn derivative(&self) -> FourierSymbol {
        let coeffs = self
            .indexed_coeffs()
            .map(|(n, c)| c * Complex64::new(0.0, n as f64))
            .collect();
        FourierSymbol {
            lo: self.lo,
            coeffs,
            evaluator: self.evaluator.as_ref().map(|e| Evaluator {
                family: e.family.clone(),
                t_derivative: e.t_derivative + 1,
            }),
            truncation: self.truncation,
            residual_bound: if self.is_exact() { 0.0 } else { f64::INFINITY },
        }
    }

    /// The complex conjugate symbol, with coefficients `conj(f(-n))`.
    pub fn conj(&self) -> FourierSymbol {
        let hi = self.max_index();
        let coeffs = (0..self.coeffs.len())
            .map(|j| self.coeff(hi - j as i64).conj())
            .collect();
        FourierSymbol {
            lo: -hi,
            coeffs,
            evaluator: None,
            truncation: self.truncation,
            residual_bound: self.residual_bound,
        }
    }

    /// Pointwise product, computed as a coefficient convolution.
    pub fn multiply(&self, other: &FourierSymbol) -> FourierSymbol {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let residual = self.residual_bound * other.l1_norm()
            + other.residual_bound * self.l1_norm()
            + self.residual_bound * other.residual_bound;
        FourierSymbol {
            lo: self.lo + other.lo,
            coeffs,
            evaluator: None,
            truncation: None,
            residual_bound: residual,
        }
    }

    /// `||f||_{W^{1/2}} = (sum (1 + |n|) |f(n)|^2)^{1/2}`, either from the
    /// coefficients or from the Douglas double integral
    /// `||f||_2^2 + (2pi)^{-2} int int |f(s) - f(t)|^2 / |e^{is} - e^{it}|^2`.
    pub fn sobolev_half_norm(&self, method: SobolevMethod) -> f64 {
        match method {
            SobolevMethod::Coefficient => self
                .indexed_coeffs()
                .map(|(n, c)| (1.0 + n.unsigned_abs() as f64) * c.norm_sqr())
                .sum::<f64>()
                .sqrt(),
            SobolevMethod::DoubleIntegral => {
                let m = if self.evaluator.is_some() {
                    DEFAULT_GRID
                } else {
                    (4 * self.degree() + 4).next_power_of_two().max(64)
                };
                self.sobolev_double_integral(m).sqrt()
            }
        }
    }

    /// Squared norm from the double integral on an `m x m` periodic grid.
    /// On the diagonal the integrand is replaced by its limit `|f'(t)|^2`.
    pub fn sobolev_double_integral(&self, m: usize) -> f64 {
        let h = 2.0 * PI / m as f64;
        let vals: Vec<(Complex64, Complex64)> =
            (0..m).map(|j| self.evaluate_with_derivative(j as f64 * h)).collect();
        let l2: f64 = vals.iter().map(|v| v.0.norm_sqr()).sum::<f64>() / m as f64;
        // The integrand depends on s - t only through the chord length, so
        // precompute |e^{is} - e^{it}|^2 = 4 sin^2((s - t)/2) per offset.
        let chord: Vec<f64> = (0..m).map(|k| 4.0 * (0.5 * k as f64 * h).sin().powi(2)).collect();
        let mut total = 0.0;
        for j in 0..m {
            let mut row = vals[j].1.norm_sqr();
            for k in 1..m {
                let other = &vals[(j + k) % m];
                row += (vals[j].0 - other.0).norm_sqr() / chord[k];
            }
            total += row;
        }
        l2 + total / (m * m) as f64
    }

    fn check_inside(z: Complex64) -> Result<(), SymbolError> {
        if z.norm() < 1.0 {
            Ok(())
        } else {
            Err(SymbolError::OutsideDisk { z })
        }
    }

    /// `sum_{n>=0} f(n) z^n + sum_{n>=1} f(-n) conj(z)^n`.
    pub fn harmonic_extension(&self, z: Complex64) -> Result<Complex64, SymbolError> {
        FourierSymbol::check_inside(z)?;
        if let Some(f) = self.family() {
            if f.is_analytic() {
                return Ok(f.eval_jet(&DiskPoint::from_z(Jet::constant(z, 0))).value());
            }
        }
        let (plus, minus) = self.split_parts();
        let zc = z.conj();
        Ok(horner(&plus, z) + zc * horner(&minus, zc))
    }

    /// Coefficients of `F_+(z) = sum_{n>=0} f(n) z^n` and of
    /// `sum_{n>=1} f(-n) w^{n-1}`.
    pub fn split_parts(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let hi = self.max_index().max(0) as usize;
        let plus: Vec<Complex64> = (0..=hi).map(|n| self.coeff(n as i64)).collect();
        let lo = (-self.min_index()).max(0) as usize;
        let minus: Vec<Complex64> = (1..=lo.max(1)).map(|n| self.coeff(-(n as i64))).collect();
        (plus, minus)
    }

    /// The holomorphic extension `F(z)`.
    pub fn analytic_extension(&self, z: Complex64) -> Result<Complex64, SymbolError> {
        self.analytic_derivative(z, 0)
    }

    /// `F^{(n)}(z)`.
    pub fn analytic_derivative(&self, z: Complex64, n: usize) -> Result<Complex64, SymbolError> {
        Ok(self.analytic_jet(z, Complex64::new(1.0, 0.0), n)?.derivative(n))
    }

    /// Jet of `F(z + scale u)` in `u` up to the given order.
    pub fn analytic_jet(&self, z: Complex64, scale: Complex64, order: usize) -> Result<Jet, SymbolError> {
        FourierSymbol::check_inside(z)?;
        if !self.is_analytic() {
            return Err(SymbolError::NotAnalytic);
        }
        let var = Jet::variable(z, scale, order);
        match self.family() {
            Some(f) => Ok(f.eval_jet(&DiskPoint::from_z(var))),
            None => {
                let series: Vec<Complex64> = (0..=self.max_index().max(0)).map(|k| self.coeff(k)).collect();
                Ok(var.compose_series(&series))
            }
        }
    }

    /// Zeros on the circle with their profiles: exact for families, fitted
    /// for coefficient symbols.
    pub fn circle_zeros(&self) -> Result<Vec<ZeroProfile>, SymbolError> {
        match self.family() {
            Some(f) => f.zero_profiles(),
            None => zeros::fit_circle_zeros(self, DEFAULT_GRID),
        }
    }

    /// Angles in `[0, 2pi)` where the symbol is not smooth.
    pub fn boundary_singularities(&self) -> Vec<f64> {
        self.family().map(|f| f.boundary_singularities()).unwrap_or_default()
    }
}

/// The skew form `omega(f, g) = sum_n n f(-n) g(n)`.
pub fn omega_form(f: &FourierSymbol, g: &FourierSymbol) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (n, c) in g.indexed_coeffs() {
        if n != 0 {
            total += f.coeff(-n) * c * n as f64;
        }
    }
    total
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Maximizes a unimodal function on `[a, b]` by golden-section search.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Fourier coefficients of a family on `[-d, d]` (or `[0, d]` for analytic
/// families) from a fine FFT, with a tail estimate from the same data.
fn fft_coefficients(family: &SymbolFamily, degree: usize) -> (i64, Vec<Complex64>, f64) {
    let m = (16 * (degree + 1)).max(1 << 16).next_power_of_two();
    let spectrum = family_spectrum(family, m);
    let d = degree as i64;
    let lo = if family.is_analytic() { 0 } else { -d };
    let coeffs: Vec<Complex64> = (lo..=d).map(|k| spectrum(k)).collect();
    let residual = tail_estimate(family, degree, &spectrum, m);
    (lo, coeffs, residual)
}

fn family_tail_from_fft(family: &SymbolFamily, degree: usize) -> f64 {
    let m = (16 * (degree + 1)).max(1 << 12).next_power_of_two();
    let spectrum = family_spectrum(family, m);
    tail_estimate(family, degree, &spectrum, m)
}

fn tail_estimate(family: &SymbolFamily, degree: usize, spectrum: &dyn Fn(i64) -> Complex64, m: usize) -> f64 {
    let d = degree as i64;
    let half = (m / 2) as i64;
    let analytic = family.is_analytic();
    let mut observed = 0.0;
    for k in d + 1..half {
        observed += spectrum(k).norm();
        if !analytic {
            observed += spectrum(-k).norm();
        }
    }
    match family.decay() {
        Decay::Finite { .. } | Decay::Geometric => observed,
        Decay::Power { exponent } => {
            // sum_{k > d} A k^{-e} ~ |c_d| d / (e - 1)
            spectrum(d).norm() * d.max(1) as f64 / (exponent - 1.0)
        }
        Decay::LogSquared => {
            // sum_{k > d} A / (k log^2 k) ~ A / log d with A = |c_d| d log^2 d
            let df = (d.max(3)) as f64;
            spectrum(d).norm() * df * df.ln()
        }
    }
}

/// Returns `k -> f(k)` computed from `m` samples on a half-shifted grid
/// (which avoids sampling exactly at `t = pi`).
fn family_spectrum(family: &SymbolFamily, m: usize) -> impl Fn(i64) -> Complex64 {
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| family.value(2.0 * PI * (j as f64 + 0.5) / m as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    move |k: i64| {
        let idx = k.rem_euclid(m as i64) as usize;
        buf[idx] * Complex64::from_polar(1.0 / m as f64, -PI * k as f64 / m as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_and_derivative_of_simple_symbols() {
        let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert!((shift.evaluate(PI) - c(-1.0, 0.0)).norm() < 1e-15);
        let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap();
        let d = f.derivative();
        assert_eq!(d.coeff(1), c(0.0, 1.0));
        assert_eq!(d.coeff(0), c(0.0, 0.0));
    }

    #[test]
    fn family_truncations() {
        let f = FourierSymbol::from_family(SymbolFamily::TwistedPower { n: 0, alpha: 1.0 }, 1, TruncationMode::Raw).unwrap();
        assert_eq!(f.coeff(0), c(1.0, 0.0));
        assert_eq!(f.coeff(1), c(1.0, 0.0));
        assert!(f.is_exact());
        let g = FourierSymbol::from_family(
            SymbolFamily::Rational {
                scale: c(1.0, 0.0),
                zeros: vec![Root { at: c(-1.0, 0.0), multiplicity: 1 }],
                poles: vec![],
            },
            4,
            TruncationMode::Raw,
        )
        .unwrap();
        assert!((g.coeff(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((g.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(g.is_exact());
    }

    #[test]
    fn fft_coefficients_of_rational_family_are_geometric() {
        // (z - 1/2)/(z - 2) = -(1/2)(z - 1/2) sum_k z^k / 2^k on the circle.
        let f = FourierSymbol::from_family(
            SymbolFamily::Rational {
                scale: c(1.0, 0.0),
                zeros: vec![Root { at: c(0.5, 0.0), multiplicity: 1 }],
                poles: vec![Root { at: c(2.0, 0.0), multiplicity: 1 }],
            },
            40,
            TruncationMode::Raw,
        )
        .unwrap();
        assert!((f.coeff(0) - c(0.25, 0.0)).norm() < 1e-13);
        // k >= 1: -(1/2)(2^{-(k-1)} - 2^{-k}/2) = -(3/4) 2^{-k}
        for k in 1..10 {
            let expected = -0.75 * 0.5f64.powi(k);
            assert!((f.coeff(k as i64).re - expected).abs() < 1e-13, "k={k}");
        }
        assert!(f.residual_bound() < 1e-11);
    }

    #[test]
    fn sobolev_norm_examples() {
        let f = FourierSymbol::from_coefficients(&[(2, c(3.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        let a = f.sobolev_half_norm(SobolevMethod::Coefficient);
        let b = f.sobolev_half_norm(SobolevMethod::DoubleIntegral);
        assert!((a - 29f64.sqrt()).abs() < 1e-14);
        assert!((a - b).abs() < 1e-6, "{a} {b}");
        let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert!((shift.sobolev_half_norm(SobolevMethod::Coefficient) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn omega_of_shift_pair() {
        let a = FourierSymbol::from_real_coefficients(&[(-1, 1.0)]).unwrap();
        let b = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert_eq!(omega_form(&a, &b), c(1.0, 0.0));
        assert_eq!(omega_form(&b, &a), c(-1.0, 0.0));
    }

    #[test]
    fn extensions() {
        let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert_eq!(shift.harmonic_extension(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap();
        let z = c(0.3, -0.4);
        assert!((f.analytic_extension(z).unwrap() - (1.0 + z)).norm() < 1e-15);
        assert!((f.analytic_derivative(z, 1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let g = FourierSymbol::from_real_coefficients(&[(-1, 1.0)]).unwrap();
        assert_eq!(g.analytic_extension(z), Err(SymbolError::NotAnalytic));
        assert!(matches!(f.analytic_extension(c(1.0, 0.0)), Err(SymbolError::OutsideDisk { .. })));
    }

    #[test]
    fn zero_profile_of_one_plus_shift() {
        let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap();
        let zs = f.circle_zeros().unwrap();
        assert_eq!(zs.len(), 1);
        assert!((zs[0].location - PI).abs() < 1e-10);
        assert_eq!(zs[0].order, 2.0);
        assert!((zs[0].h_value - 1.0).abs() < 1e-10);
        assert!((zs[0].g_value - c(1.0, 0.0)).norm() < 1e-2);
        let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert!(shift.circle_zeros().unwrap().is_empty());
    }

    #[test]
    fn double_zero_is_profiled_with_order_four() {
        // (1 + e^{it})^2
        let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 2.0), (2, 1.0)]).unwrap();
        let zs = f.circle_zeros().unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].order, 4.0);
        assert!((zs[0].h_value - 1.0).abs() < 1e-8);
    }
}
