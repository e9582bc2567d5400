//! Operator monotone functions through their resolvent integral
//! representation `phi(x) = phi(0) + a x + int x/(lambda + x) lambda dmu(lambda)`.

use super::trace::{pair_spectrum, power_rate, richardson_in_size, PairSpectrum, TraceEstimate};
use super::{FuncalcError, ScalarFunction};
use crate::quadrature::rules::{adaptive_real, Tolerance};
use crate::symbol::FourierSymbol;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Range of `u = ln(lambda)` handled by quadrature; the rest is covered by
/// power-law tail formulas.
pub const LOG_LAMBDA_RANGE: (f64, f64) = (-30.0, 30.0);

/// Density of the absolutely continuous part of the measure.
#[derive(Clone)]
pub enum Density {
    None,
    /// `(sin(q pi)/pi) lambda^{q-2}`, the measure of `x^q`.
    PowerQ { q: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::None => write!(f, "None"),
            Density::PowerQ { q } => write!(f, "PowerQ {{ q: {q} }}"),
            Density::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorMonotone {
    pub linear: f64,
    pub value_at_zero: f64,
    /// Point masses `(lambda, mass)`.
    pub atoms: Vec<(f64, f64)>,
    pub density: Density,
}

impl OperatorMonotone {
    /// `x^q` for `0 < q < 1`.
    pub fn power_q(q: f64) -> Result<Self, FuncalcError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(FuncalcError::InvalidFunction(format!("power_q needs 0 < q < 1, got {q}")));
        }
        Ok(OperatorMonotone {
            linear: 0.0,
            value_at_zero: 0.0,
            atoms: Vec::new(),
            density: Density::PowerQ { q },
        })
    }

    /// `x / (lambda + x)`, a single point mass `1/lambda` at `lambda`.
    pub fn resolvent(lambda: f64) -> Result<Self, FuncalcError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(FuncalcError::InvalidFunction(format!("resolvent needs lambda > 0, got {lambda}")));
        }
        Ok(OperatorMonotone {
            linear: 0.0,
            value_at_zero: 0.0,
            atoms: vec![(lambda, 1.0 / lambda)],
            density: Density::None,
        })
    }

    /// The scalar function this measure represents, when it has a name.
    pub fn named_function(&self) -> Option<ScalarFunction> {
        if self.linear != 0.0 || self.value_at_zero != 0.0 {
            return None;
        }
        match (&self.density, self.atoms.as_slice()) {
            (Density::PowerQ { q }, []) => Some(ScalarFunction::Power { p: *q }),
            (Density::None, [(lambda, mass)]) if (mass * lambda - 1.0).abs() < 1e-15 => {
                Some(ScalarFunction::Resolvent { lambda: *lambda })
            }
            _ => None,
        }
    }

    /// Exponent `q` when the function behaves like `x^q` near 0 because its
    /// measure is a power density alone.
    pub fn small_argument_power(&self) -> Option<f64> {
        match (&self.density, self.atoms.is_empty(), self.linear) {
            (Density::PowerQ { q }, true, _) => Some(*q),
            _ => None,
        }
    }

    pub fn density(&self, lambda: f64) -> f64 {
        match &self.density {
            Density::None => 0.0,
            Density::PowerQ { q } => (q * PI).sin() / PI * lambda.powf(q - 2.0),
            Density::Custom(rho) => rho(lambda),
        }
    }

    /// Numerical check that `int lambda/(1+lambda) dmu` is finite: the
    /// integrand, as a function of `ln(lambda)`, must decay at both ends.
    /// Returns the fitted end slopes.
    pub fn check_integrability(&self) -> Result<(f64, f64), FuncalcError> {
        let g = |u: f64| {
            let lambda = u.exp();
            lambda * lambda / (1.0 + lambda) * self.density(lambda)
        };
        let slope = |u0: f64, u1: f64| (g(u1).ln() - g(u0).ln()) / (u1 - u0);
        let (lo, hi) = LOG_LAMBDA_RANGE;
        if matches!(self.density, Density::None) {
            return Ok((f64::INFINITY, f64::NEG_INFINITY));
        }
        let low = slope(lo, lo + 2.0);
        let high = slope(hi - 2.0, hi);
        if !(low > 0.0 && high < 0.0) {
            return Err(FuncalcError::DivergentTail(format!(
                "measure tail slopes {low} (lambda -> 0) and {high} (lambda -> inf) do not both decay"
            )));
        }
        Ok((low, high))
    }

    /// `phi(x)` recomputed from the measure. The integral runs in
    /// `v = ln(lambda / x)`, where the kernel is `x e^v / (1 + e^v)` times
    /// `lambda dmu`.
    pub fn reconstruct(&self, x: f64) -> Result<f64, FuncalcError> {
        let mut value = self.value_at_zero + self.linear * x;
        for (lambda, mass) in &self.atoms {
            value += x / (lambda + x) * lambda * mass;
        }
        if x <= 0.0 || matches!(self.density, Density::None) {
            return Ok(value);
        }
        let (v_lo, v_hi) = (-40.0, 40.0);
        let integrand = |v: f64| {
            let lambda = x * v.exp();
            let kernel = x / (lambda + x);
            kernel * lambda * lambda * self.density(lambda)
        };
        let (body, _) = adaptive_real(integrand, v_lo, v_hi, &[], Tolerance::new(1e-15, 1e-13), 2000);
        let tails = match &self.density {
            Density::PowerQ { q } => {
                // Integrand is c x^q e^{qv}/(1+e^v): expand both ends.
                let c = (q * PI).sin() / PI * x.powf(*q);
                let lower = c * ((q * v_lo).exp() / q - ((q + 1.0) * v_lo).exp() / (q + 1.0));
                let upper = c * (((q - 1.0) * v_hi).exp() / (1.0 - q) - ((q - 2.0) * v_hi).exp() / (2.0 - q));
                lower + upper
            }
            _ => {
                self.check_integrability()?;
                let lo_slope = (integrand(v_lo + 1.0) / integrand(v_lo)).ln();
                let hi_slope = (integrand(v_hi) / integrand(v_hi - 1.0)).ln();
                integrand(v_lo) / lo_slope - integrand(v_hi) / hi_slope
            }
        };
        Ok(value + body + tails)
    }
}

/// `Tr(phi(A_N) - phi(B_N))` through
/// `a Tr(A - B) + int Tr((lambda + B)^{-1} - (lambda + A)^{-1}) lambda^2 dmu`.
///
/// The density part is integrated in `u = ln(lambda)` over
/// [`LOG_LAMBDA_RANGE`]; below it the resolvent difference is bounded by its
/// `1/lambda` growth and above it by `Tr(A - B)/lambda^2`. For power
/// densities against symbols with circle zeros the sizes `n/2, n, 2n` are
/// combined as in [`trace_phi_difference`](super::trace_phi_difference);
/// otherwise the value at `2n` is reported against the value at `n`.
pub fn om_resolvent_trace(f: &FourierSymbol, phi: &OperatorMonotone, n: usize) -> Result<TraceEstimate, FuncalcError> {
    if !matches!(phi.density, Density::None) {
        phi.check_integrability()?;
    }
    let at = |size: usize| -> Result<(f64, f64), FuncalcError> { resolvent_trace_at(&pair_spectrum(f, size)?.floored(), phi) };
    if let Some(rate) = phi.small_argument_power().and_then(|q| power_rate(f, q)) {
        if let Some(r) = richardson_in_size(f, n, rate, |size| at(size).map(|v| v.0)) {
            let (value, error) = r?;
            return Ok(TraceEstimate {
                value,
                error,
                truncation_error: None,
                size: 2 * n,
                method: format!("resolvent integral, Richardson in N at rate {rate}"),
            });
        }
    }
    let (coarse, fine) = rayon::join(|| at(n), || at(2 * n));
    let ((coarse, _), (value, error)) = (coarse?, fine?);
    Ok(TraceEstimate {
        value,
        error: error + (value - coarse).abs(),
        truncation_error: None,
        size: 2 * n,
        method: "resolvent integral".into(),
    })
}

fn resolvent_trace_at(spectrum: &PairSpectrum, phi: &OperatorMonotone) -> Result<(f64, f64), FuncalcError> {
    let gap = spectrum.trace_gap();
    let mut value = phi.linear * gap;
    for (lambda, mass) in &phi.atoms {
        value += mass * lambda * lambda * spectrum.resolvent_difference(*lambda);
    }
    let mut error = 0.0;
    if !matches!(phi.density, Density::None) {
        let (lo, hi) = LOG_LAMBDA_RANGE;
        let weight = |lambda: f64| lambda * lambda * lambda * phi.density(lambda);
        let integrand = |u: f64| {
            let lambda = u.exp();
            weight(lambda) * spectrum.resolvent_difference(lambda)
        };
        let (body, body_error) = adaptive_real(integrand, lo, hi, &[], Tolerance::new(1e-13, 1e-11), 4000);
        let lambda_lo = lo.exp();
        let lambda_hi = hi.exp();
        let low_slope = (weight(lambda_lo * std::f64::consts::E) / weight(lambda_lo)).ln() - 1.0;
        let high_slope = (weight(lambda_hi) / weight(lambda_hi / std::f64::consts::E)).ln() - 2.0;
        if low_slope <= 0.0 || high_slope >= 0.0 {
            return Err(FuncalcError::DivergentTail(format!(
                "resolvent integrand slopes {low_slope} at 0 and {high_slope} at infinity"
            )));
        }
        let lower = weight(lambda_lo) * spectrum.resolvent_difference(lambda_lo) / low_slope;
        let upper = weight(lambda_hi) * gap / (lambda_hi * lambda_hi) / (-high_slope);
        value += body + lower + upper;
        error += body_error + 1e-3 * (lower.abs() + upper.abs());
    }
    Ok((value, error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_measure_reconstructs_power() {
        for q in [0.25, 0.5, 0.9] {
            let phi = OperatorMonotone::power_q(q).unwrap();
            for k in 0..=40 {
                let x = 10.0 * k as f64 / 40.0;
                let r = phi.reconstruct(x).unwrap();
                assert!((r - x.powf(q)).abs() < 1e-8, "q={q} x={x}: {r}");
            }
        }
    }

    #[test]
    fn custom_density_matches_named() {
        let q = 0.5;
        let phi = OperatorMonotone {
            linear: 0.0,
            value_at_zero: 0.0,
            atoms: Vec::new(),
            density: Density::Custom(Arc::new(move |l: f64| (q * PI).sin() / PI * l.powf(q - 2.0))),
        };
        assert!((phi.reconstruct(2.0).unwrap() - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn divergent_measure_is_reported() {
        let phi = OperatorMonotone {
            linear: 0.0,
            value_at_zero: 0.0,
            atoms: Vec::new(),
            density: Density::Custom(Arc::new(|l: f64| 1.0 / l)),
        };
        assert!(matches!(phi.check_integrability(), Err(FuncalcError::DivergentTail(_))));
    }

    #[test]
    fn shift_and_atoms() {
        let shift = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        let phi = OperatorMonotone::power_q(0.5).unwrap();
        let r = om_resolvent_trace(&shift, &phi, 6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
        let res = OperatorMonotone::resolvent(0.7).unwrap();
        let r = om_resolvent_trace(&shift, &res, 6).unwrap();
        assert!((r.value - 1.0 / 1.7).abs() < 1e-14);
    }
}
