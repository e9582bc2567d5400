//! Fredholm and Witten indices, the principal function and spectral shift
//! functions of Toeplitz operators, each computed by more than one route.
//!
//! # Sign conventions
//!
//! | quantity | definition | in terms of the winding number `wind(f, w)` |
//! |---|---|---|
//! | Fredholm index | `dim ker T_f - dim coker T_f` | `-wind(f, 0)` |
//! | Witten index | `lim_s Tr(e^{-s T^*T} - e^{-s TT^*})` | `-(1/2 pi i) p.v. int f'/f` |
//! | heat trace | `Tr(e^{-sB} - e^{-sA})` | tends to minus the Witten index |
//! | power limit | `lim_{p -> 0} Tr(|T_f|^p - |T_f^*|^p)` | minus the Witten index |
//! | principal function | `g(w) = -ind(T_f - w)` | `wind(f, w)` |
//!
//! Every route converts through the functions in [`conventions`].

pub mod closed_forms;
pub mod ssf;

pub use closed_forms::{closed_form, ExampleId};
pub use ssf::{krein_check, spectral_shift, ssf_from_principal, ssf_pushforward, KreinReport, SpectralShiftFunction, SsfRoute};

use crate::funcalc::{heat_trace, FuncalcError, ScalarFunction};
use crate::operators::{commutator_trace, OperatorError};
use crate::quadrature::circle::{boundary_trace_integral, heat_integral, integrate_circle, normalized_pv, principal_value_integral};
use crate::quadrature::extrapolate::{fit_power_model, neville_at_zero};
use crate::quadrature::{QuadratureError, QuadratureSettings};
use crate::symbol::{zeros, FourierSymbol, SymbolError, ZeroProfile, DEFAULT_GRID};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Winding numbers are accepted when the integral is this close to an
/// integer.
pub const ROUNDING_TOL: f64 = 0.1;
/// Powers `p` of `Tr(|T_f|^p - |T_f^*|^p)` extrapolated to `p = 0`.
pub const POWER_SCHEDULE: [f64; 4] = [1.0, 0.5, 0.25, 0.125];
/// Heat parameters for the Witten limit.
pub const HEAT_SCHEDULE: [f64; 4] = [25.0, 50.0, 100.0, 200.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("point {w} is within {distance:e} of the curve f(T)")]
    CloseToCurve { w: Complex64, distance: f64 },
    #[error("winding integral {value} is not close to an integer")]
    NotInteger { value: f64 },
    #[error("symbol has {count} zero(s) on the circle, so T_f is not Fredholm; use the Witten index")]
    CircleZeros { count: usize },
    #[error("unknown example id {0:?}")]
    UnknownExample(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("could not resolve: {0}")]
    Unresolved(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Funcalc(#[from] FuncalcError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// The sign conventions linking the index-type quantities.
pub mod conventions {
    /// Fredholm index from the winding number about 0.
    pub fn fredholm_from_winding(winding: i64) -> i64 {
        -winding
    }

    /// Witten index from `(1/2 pi i) p.v. int f'/f`.
    pub fn witten_from_pv(normalized_pv: f64) -> f64 {
        -normalized_pv
    }

    /// Witten index from the large-`s` limit of `Tr(e^{-sB} - e^{-sA})`.
    pub fn witten_from_heat_limit(limit: f64) -> f64 {
        -limit
    }

    /// Witten index from `lim_{p -> 0} Tr(|T_f|^p - |T_f^*|^p)`.
    pub fn witten_from_power_limit(limit: f64) -> f64 {
        -limit
    }

    /// Principal function from the winding number about `w`.
    pub fn principal_from_winding(winding: f64) -> f64 {
        winding
    }

    /// Rows of the conventions table: quantity, definition, formula.
    pub const TABLE: [(&str, &str, &str); 5] = [
        ("fredholm", "dim ker T_f - dim coker T_f", "-wind(f, 0)"),
        ("witten", "lim Tr(exp(-s T*T) - exp(-s TT*))", "-(1/2 pi i) p.v. int f'/f dt"),
        ("heat_trace", "Tr(exp(-s B) - exp(-s A))", "-> -witten as s -> inf"),
        ("power_limit", "lim_(p->0) Tr(|T_f|^p - |T_f*|^p)", "-> -witten"),
        ("principal_function", "-ind(T_f - w)", "wind(f, w)"),
    ];
}

fn sample_count(f: &FourierSymbol) -> usize {
    DEFAULT_GRID.max(16 * (f.degree() + 1)).next_power_of_two()
}

/// Smallest sampled distance from `w` to the curve, and the curve scale.
fn distance_to_curve(f: &FourierSymbol, w: Complex64) -> (f64, f64) {
    let values = f.sample(sample_count(f));
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let distance = values.iter().map(|v| (v - w).norm()).fold(f64::INFINITY, f64::min);
    (distance, scale)
}

/// `(1/2 pi i) int f'/(f - w) dt` without rounding.
fn winding_integral(f: &FourierSymbol, w: Complex64) -> Complex64 {
    let r = integrate_circle(
        |t| {
            let (value, derivative) = f.evaluate_with_derivative(t);
            derivative / (value - w)
        },
        &f.boundary_singularities(),
        DEFAULT_GRID,
    );
    r.value / Complex64::new(0.0, TAU)
}

/// Winding number of `f` about `w`, by the argument principle.
pub fn winding_number(f: &FourierSymbol, w: Complex64) -> Result<i64, IndexError> {
    let (distance, scale) = distance_to_curve(f, w);
    if distance <= 1e-8 * scale.max(1.0) {
        return Err(IndexError::CloseToCurve { w, distance });
    }
    let value = winding_integral(f, w).re;
    let rounded = value.round();
    if (value - rounded).abs() >= ROUNDING_TOL {
        return Err(IndexError::NotInteger { value });
    }
    Ok(rounded as i64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmReport {
    pub index: i64,
    /// `Tr([T_f, T_{1/f}])` with `1/f` expanded to a finite Fourier series.
    pub commutator_trace: f64,
    pub commutator_agrees: bool,
}

/// Fourier coefficients of `1/f`, truncated where they fall below
/// `1e-15` relative to the largest.
pub fn reciprocal_symbol(f: &FourierSymbol) -> Result<FourierSymbol, IndexError> {
    let mut m = 256usize.max(4 * (f.degree() + 1)).next_power_of_two();
    loop {
        let values = f.sample(m);
        if values.iter().any(|v| v.norm() == 0.0) {
            return Err(IndexError::CircleZeros { count: 1 });
        }
        let mut buf: Vec<Complex64> = values.iter().map(|v| 1.0 / v).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let half = m as i64 / 2;
        let coeff = |k: i64| buf[k.rem_euclid(m as i64) as usize] / m as f64;
        let largest = (-half..half).map(|k| coeff(k).norm()).fold(0.0, f64::max);
        let edge = (-half..-half + m as i64 / 8)
            .chain(half - m as i64 / 8..half)
            .map(|k| coeff(k).norm())
            .fold(0.0, f64::max);
        if edge <= 1e-14 * largest || m >= 1 << 14 {
            let pairs: Vec<(i64, Complex64)> = (-half..half)
                .map(|k| (k, coeff(k)))
                .filter(|(_, c)| c.norm() > 1e-15 * largest)
                .collect();
            return Ok(FourierSymbol::from_coefficients(&pairs)?);
        }
        m *= 2;
    }
}

/// Zeros on the circle, whether profiled or not.
fn circle_zero_count(f: &FourierSymbol) -> usize {
    match f.circle_zeros() {
        Ok(z) => z.len(),
        Err(SymbolError::UnprofiledZero { .. }) => 1,
        Err(_) => zeros::locate_zeros(f, DEFAULT_GRID).len(),
    }
}

/// `-wind(f, 0)`, cross-checked against `Tr([T_f, T_{1/f}])`.
pub fn fredholm_index(f: &FourierSymbol) -> Result<FredholmReport, IndexError> {
    let count = circle_zero_count(f);
    if count > 0 {
        return Err(IndexError::CircleZeros { count });
    }
    let index = conventions::fredholm_from_winding(winding_number(f, Complex64::new(0.0, 0.0))?);
    let inverse = reciprocal_symbol(f)?;
    let trace = commutator_trace(&f.truncated(), &inverse)?.trace.re;
    Ok(FredholmReport {
        index,
        commutator_trace: trace,
        commutator_agrees: (trace - index as f64).abs() < 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub name: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub fredholm: Option<i64>,
    pub witten: Option<f64>,
    pub routes: Vec<Route>,
    pub zeros: Vec<ZeroProfile>,
    /// Imaginary part of the normalized principal-value integral, which
    /// vanishes in exact arithmetic.
    pub imaginary_residual: f64,
    pub agreement: bool,
}

/// Section size used for heat traces of finite symbols.
fn heat_section_size(f: &FourierSymbol) -> usize {
    256usize.max(8 * f.degree())
}

/// `-lim_s Tr(e^{-sB} - e^{-sA})` from the heat schedule.
///
/// With zeros of smallest order `beta` the heat trace approaches its limit
/// like `s^{-1/beta}`; the limit is the constant of a least-squares fit of
/// `c_0 + c_1 s^{-1/beta} + c_2 s^{-3/beta}`, and the error is its change
/// from the two-term fit. Without zeros the convergence is exponential
/// and the last value is used. Exact symbols use matrix heat traces,
/// truncated families the heat integral, which equals the trace exactly.
pub fn heat_limit(f: &FourierSymbol, zeros: &[ZeroProfile], settings: &QuadratureSettings) -> Result<Route, IndexError> {
    let values: Vec<f64> = HEAT_SCHEDULE
        .iter()
        .map(|&s| -> Result<f64, IndexError> {
            if f.is_exact() {
                Ok(heat_trace(f, s, heat_section_size(f))?.value)
            } else {
                Ok(heat_integral(f, s, settings)?.value.re)
            }
        })
        .collect::<Result<_, _>>()?;
    let beta = zeros.iter().map(|z| z.order).fold(f64::INFINITY, f64::min);
    let (limit, error, name) = if beta.is_finite() {
        let rate = 1.0 / beta;
        let inverse: Vec<f64> = HEAT_SCHEDULE.iter().map(|s| 1.0 / s).collect();
        let three = fit_power_model(&inverse, &values, &[rate, 3.0 * rate])
            .ok_or_else(|| IndexError::Unresolved("heat fit is singular".into()))?;
        let two = fit_power_model(&inverse, &values, &[rate])
            .ok_or_else(|| IndexError::Unresolved("heat fit is singular".into()))?;
        (three[0], (three[0] - two[0]).abs(), "heat_limit")
    } else {
        let n = values.len();
        (values[n - 1], (values[n - 1] - values[n - 2]).abs(), "heat_limit")
    };
    Ok(Route {
        name: name.into(),
        value: conventions::witten_from_heat_limit(limit),
        error,
    })
}

/// `-lim_{p -> 0} Tr(|T_f|^p - |T_f^*|^p)` from the powers in
/// [`POWER_SCHEDULE`], each trace computed by the boundary integral of
/// `phi(x) = x^{p/2}`. The trace is analytic in `p`, so the limit is the
/// interpolating polynomial at 0; the error is its change when the
/// coarsest power is dropped.
pub fn power_limit(f: &FourierSymbol, settings: &QuadratureSettings) -> Result<Route, IndexError> {
    let values: Vec<f64> = POWER_SCHEDULE
        .iter()
        .map(|&p| -> Result<f64, IndexError> {
            Ok(boundary_trace_integral(f, &ScalarFunction::Power { p: 0.5 * p }, settings)?.value.re)
        })
        .collect::<Result<_, _>>()?;
    let all = neville_at_zero(&POWER_SCHEDULE, &values);
    let fine = neville_at_zero(&POWER_SCHEDULE[1..], &values[1..]);
    Ok(Route {
        name: "power_limit".into(),
        value: conventions::witten_from_power_limit(all),
        error: (all - fine).abs(),
    })
}

/// Witten index by the principal-value route, the heat limit and, for
/// families with one, the closed form.
pub fn witten_index(f: &FourierSymbol, settings: &QuadratureSettings) -> Result<IndexReport, IndexError> {
    let zeros = f.circle_zeros()?;
    let pv = principal_value_integral(f, &zeros, settings)?;
    let normalized = normalized_pv(&pv);
    let pv_route = Route {
        name: "pv_integral".into(),
        value: conventions::witten_from_pv(normalized.re),
        error: pv.abs_error_estimate / TAU,
    };
    let mut routes = vec![pv_route.clone()];
    routes.push(heat_limit(f, &zeros, settings)?);
    if let Some(value) = f.family().and_then(|fam| fam.witten_closed_form()) {
        routes.push(Route {
            name: "closed_form".into(),
            value,
            error: 0.0,
        });
    }
    let fredholm = if zeros.is_empty() {
        Some(fredholm_index(f)?.index)
    } else {
        None
    };
    let mut agreement = routes.iter().all(|a| {
        routes
            .iter()
            .all(|b| (a.value - b.value).abs() <= a.error + b.error + 1e-8)
    });
    if let Some(index) = fredholm {
        agreement &= (pv_route.value - index as f64).abs() <= pv_route.error + 1e-8;
    }
    Ok(IndexReport {
        fredholm,
        witten: Some(pv_route.value),
        routes,
        zeros,
        imaginary_residual: normalized.im.abs(),
        agreement,
    })
}

/// `g(w) = -ind(T_f - w)`, the winding number of `f` about `w`. For `w` on
/// the curve of a coefficient symbol the principal-value winding number is
/// returned.
pub fn principal_function(f: &FourierSymbol, w: Complex64, settings: &QuadratureSettings) -> Result<f64, IndexError> {
    match winding_number(f, w) {
        Ok(n) => Ok(conventions::principal_from_winding(n as f64)),
        Err(IndexError::CloseToCurve { .. }) => {
            if f.family().is_some() {
                return Err(IndexError::Unresolved(format!(
                    "{w} lies on the curve of a family symbol; its zero profile is unknown"
                )));
            }
            let pairs: Vec<(i64, Complex64)> = f
                .indexed_coeffs()
                .map(|(k, c)| if k == 0 { (k, c - w) } else { (k, c) })
                .chain(std::iter::once((0, Complex64::new(0.0, 0.0))))
                .collect();
            let shifted = FourierSymbol::from_coefficients(&pairs)?;
            let zeros = zeros::fit_circle_zeros(&shifted, DEFAULT_GRID)?;
            let pv = principal_value_integral(&shifted, &zeros, settings)?;
            Ok(conventions::principal_from_winding(normalized_pv(&pv).re))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(pairs: &[(i64, f64)]) -> FourierSymbol {
        FourierSymbol::from_real_coefficients(pairs).unwrap()
    }

    #[test]
    fn winding_examples() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(winding_number(&sym(&[(1, 1.0)]), zero).unwrap(), 1);
        assert_eq!(winding_number(&sym(&[(3, 1.0)]), zero).unwrap(), 3);
        // (z - 1/2)(z - 2) = z^2 - 2.5 z + 1
        assert_eq!(winding_number(&sym(&[(0, 1.0), (1, -2.5), (2, 1.0)]), zero).unwrap(), 1);
        assert!(matches!(
            winding_number(&sym(&[(1, 1.0)]), Complex64::new(1.0, 0.0)),
            Err(IndexError::CloseToCurve { .. })
        ));
    }

    #[test]
    fn fredholm_examples() {
        let r = fredholm_index(&sym(&[(1, 1.0)])).unwrap();
        assert_eq!(r.index, -1);
        assert!(r.commutator_agrees, "{r:?}");
        let r = fredholm_index(&sym(&[(-2, 2.0), (-1, 1.0)])).unwrap();
        assert_eq!(r.index, 2);
        assert!(r.commutator_agrees, "{r:?}");
        assert!(matches!(
            fredholm_index(&sym(&[(0, 1.0), (1, 1.0)])),
            Err(IndexError::CircleZeros { .. })
        ));
    }

    #[test]
    fn principal_function_examples() {
        let settings = QuadratureSettings::default();
        let shift = sym(&[(1, 1.0)]);
        assert_eq!(principal_function(&shift, Complex64::new(0.3, 0.2), &settings).unwrap(), 1.0);
        assert_eq!(principal_function(&shift, Complex64::new(1.3, 0.0), &settings).unwrap(), 0.0);
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        assert_eq!(principal_function(&f, Complex64::new(1.0, 0.0), &settings).unwrap(), 1.0);
    }

    #[test]
    fn power_limit_of_one_plus_z() {
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let r = power_limit(&f, &QuadratureSettings::default()).unwrap();
        assert!((r.value + 0.5).abs() < 2e-2, "{r:?}");
    }
}
