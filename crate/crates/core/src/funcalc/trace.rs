//! `Tr(phi(A_N) - phi(B_N))` from the spectra of the section pair.

use super::{compensated_sum, FuncalcError, ScalarFunction};
use crate::linalg;
use crate::operators::{product_sections, SectionPair};
use crate::quadrature::extrapolate::richardson_table;
use crate::symbol::FourierSymbol;
use serde::{Deserialize, Serialize};

/// Sorted spectra of `A_N` and `B_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpectrum {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub size: usize,
}

impl PairSpectrum {
    pub fn from_pair(pair: &SectionPair) -> Result<Self, FuncalcError> {
        let (a, b) = rayon::join(
            || linalg::hermitian_eigenvalues(&pair.a),
            || linalg::hermitian_eigenvalues(&pair.b),
        );
        Ok(PairSpectrum {
            a: a?,
            b: b?,
            size: pair.size(),
        })
    }

    /// Largest absolute eigenvalue of either matrix.
    pub fn norm(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// `sum phi(a_i) - phi(b_i)` with eigenvalues paired in sorted order,
    /// accumulated with compensation.
    pub fn trace_difference(&self, phi: &ScalarFunction) -> Result<f64, FuncalcError> {
        let norm = self.norm();
        let fa = self.mapped(phi, &self.a, norm)?;
        let fb = self.mapped(phi, &self.b, norm)?;
        Ok(compensated_sum(fa.iter().zip(&fb).map(|(x, y)| x - y)))
    }

    fn mapped(&self, phi: &ScalarFunction, values: &[f64], norm: f64) -> Result<Vec<f64>, FuncalcError> {
        let base = phi.apply_to_spectrum(values, norm)?;
        // Subtracting phi(0) first keeps expm1-level accuracy for eigenvalues
        // near 0 and leaves the difference unchanged.
        let zero = phi.value_at_zero();
        Ok(values
            .iter()
            .zip(base)
            .map(|(&x, v)| if v == zero { 0.0 } else if x > 0.0 { phi.increment_from_zero(x) } else { v - zero })
            .collect())
    }

    /// The spectra with rounding-level eigenvalues set to 0, using the same
    /// floor as [`ScalarFunction::apply_to_spectrum`].
    pub fn floored(&self) -> PairSpectrum {
        let floor = 64.0 * f64::EPSILON * self.a.len().max(1) as f64 * self.norm();
        let clip = |v: &[f64]| v.iter().map(|&x| if x < floor { 0.0 } else { x }).collect();
        PairSpectrum {
            a: clip(&self.a),
            b: clip(&self.b),
            size: self.size,
        }
    }

    /// `Tr((lambda + B)^{-1} - (lambda + A)^{-1})`.
    pub fn resolvent_difference(&self, lambda: f64) -> f64 {
        compensated_sum(
            self.a
                .iter()
                .zip(&self.b)
                .map(|(a, b)| (a - b) / ((lambda + a) * (lambda + b))),
        )
    }

    /// `Tr(A_N - B_N)`.
    pub fn trace_gap(&self) -> f64 {
        compensated_sum(self.a.iter().zip(&self.b).map(|(a, b)| a - b))
    }
}

pub fn pair_spectrum(f: &FourierSymbol, n: usize) -> Result<PairSpectrum, FuncalcError> {
    PairSpectrum::from_pair(&product_sections(f, n)?)
}

/// A matrix-side trace with its discretization error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub value: f64,
    /// Size-refinement error: the spread between the two finest estimates.
    pub error: f64,
    /// Bound on the effect of truncating an infinite coefficient series,
    /// absent for exact coefficient data or when no finite bound exists.
    pub truncation_error: Option<f64>,
    /// Largest section size used.
    pub size: usize,
    pub method: String,
}

impl TraceEstimate {
    pub fn total_error(&self) -> f64 {
        self.error + self.truncation_error.unwrap_or(0.0)
    }
}

/// Algebraic convergence rate in `N` of the trace for fractional powers of
/// symbols with profiled zeros on the circle, if one applies.
fn size_rate(f: &FourierSymbol, phi: &ScalarFunction) -> Option<f64> {
    match phi {
        ScalarFunction::Power { p } => power_rate(f, *p),
        _ => None,
    }
}

/// Rate `p beta_min` for a function behaving like `x^p` at 0, when `p` is
/// fractional and `f` has profiled zeros of smallest order `beta_min`.
pub(crate) fn power_rate(f: &FourierSymbol, p: f64) -> Option<f64> {
    if p.fract() == 0.0 {
        return None;
    }
    let zeros = f.circle_zeros().ok()?;
    let smallest = zeros.iter().map(|z| z.order).fold(f64::INFINITY, f64::min);
    smallest.is_finite().then(|| p * smallest)
}

/// Values at sizes `n/2, n, 2n` combined by two Richardson steps at the
/// given rate, or `None` when `n/2` is below the symbol degree.
pub(crate) fn richardson_in_size<F>(f: &FourierSymbol, n: usize, rate: f64, at: F) -> Option<Result<(f64, f64), FuncalcError>>
where
    F: Fn(usize) -> Result<f64, FuncalcError> + Sync,
{
    if n / 2 < f.degree().max(1) {
        return None;
    }
    let (coarse, (mid, fine)) = rayon::join(|| at(n / 2), || rayon::join(|| at(n), || at(2 * n)));
    Some((|| {
        let table = richardson_table(&[coarse?, mid?, fine?], 2.0, &[rate, rate + 1.0]);
        Ok((table.value, table.error))
    })())
}

/// `Tr(phi(A_N) - phi(B_N))` compared across section sizes.
///
/// With a known algebraic rate (fractional powers against zeros of the
/// symbol) the sizes `N/2, N, 2N` are combined by two Richardson steps,
/// removing the leading power and the next one; the error is the change
/// made by the second step. Otherwise the value at `2N` is reported
/// against the value at `N`.
pub fn trace_phi_difference(f: &FourierSymbol, phi: &ScalarFunction, n: usize) -> Result<TraceEstimate, FuncalcError> {
    phi.validate()?;
    let at = |size: usize| -> Result<f64, FuncalcError> { pair_spectrum(f, size)?.trace_difference(phi) };
    let truncation_error = truncation_bound(f, phi);
    let rate = size_rate(f, phi);
    if let Some(rate) = rate {
        if let Some(r) = richardson_in_size(f, n, rate, at) {
            let (value, error) = r?;
            return Ok(TraceEstimate {
                value,
                error,
                truncation_error,
                size: 2 * n,
                method: format!("spectral, Richardson in N at rate {rate}"),
            });
        }
    }
    let (coarse, fine) = rayon::join(|| at(n), || at(2 * n));
    let (coarse, fine) = (coarse?, fine?);
    let error = (fine - coarse).abs();
    if f.is_exact() && matches!(phi, ScalarFunction::Polynomial { .. }) && error > 1e-9 * fine.abs().max(1.0) {
        log::warn!("polynomial trace changed by {error:e} between N={n} and N={}", 2 * n);
    }
    Ok(TraceEstimate {
        value: fine,
        error,
        truncation_error,
        size: 2 * n,
        method: "spectral".into(),
    })
}

/// Perturbing `f` by a tail `r` moves `A` and `B` by at most
/// `2 ||f|| ||r|| + ||r||^2` in trace norm per unit of the W^{1/2} size of
/// the tail; the trace then moves by at most `Lip(phi)` times that.
fn truncation_bound(f: &FourierSymbol, phi: &ScalarFunction) -> Option<f64> {
    if f.is_exact() {
        return None;
    }
    let tail = f.residual_bound();
    let sup = f.sup_norm() + tail;
    let lip = phi.lipschitz_bound(sup * sup);
    lip.is_finite().then(|| lip * (2.0 * sup * tail + tail * tail))
}

/// `Tr(e^{-s B_N} - e^{-s A_N})`, which tends to minus the Witten index as
/// `s` grows.
pub fn heat_trace(f: &FourierSymbol, s: f64, n: usize) -> Result<TraceEstimate, FuncalcError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(FuncalcError::InvalidFunction(format!("heat parameter must be positive, got {s}")));
    }
    let mut estimate = trace_phi_difference(f, &ScalarFunction::ExpHeat { s }, n)?;
    estimate.value = -estimate.value;
    estimate.method = format!("heat, {}", estimate.method);
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(pairs: &[(i64, f64)]) -> FourierSymbol {
        FourierSymbol::from_real_coefficients(pairs).unwrap()
    }

    #[test]
    fn shift_gives_increment() {
        let shift = sym(&[(1, 1.0)]);
        for phi in [
            ScalarFunction::Power { p: 0.5 },
            ScalarFunction::ExpHeat { s: 2.0 },
            ScalarFunction::Polynomial { coefficients: vec![3.0, 1.0, 4.0] },
        ] {
            let est = trace_phi_difference(&shift, &phi, 8).unwrap();
            let expected = phi.value(1.0) - phi.value(0.0);
            assert!((est.value - expected).abs() < 1e-13, "{phi:?}: {}", est.value);
        }
        let heat = heat_trace(&shift, 3.0, 8).unwrap();
        assert!((heat.value - (1.0 - (-3f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn square_trace_is_size_independent() {
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let est = trace_phi_difference(&f, &ScalarFunction::Power { p: 2.0 }, 16).unwrap();
        assert!((est.value - 3.0).abs() < 1e-12);
        assert!(est.error < 1e-12);
    }
}
