//! Closed-form values of the worked examples, for checking the numerical
//! routes.
//!
//! The elliptic and shift-sum examples are values of
//! `Tr(|T_f| - |T_f^*|) = Tr(phi(A) - phi(B))` with `phi(x) = x^{1/2}`:
//! `f = e^{it} + a` for the elliptic cases and `f = sum_{k<n} e^{ikt}` for
//! the shift sums.

use super::IndexError;
use crate::quadrature::rules::{tanh_sinh, Tolerance};
use crate::symbol::family::{rational_witten, Root};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Rational,
    Anyv,
    Gamma,
    EllipticSmallA,
    EllipticLargeA,
    ShiftSumEven,
    ShiftSumOdd,
    HeltonHoweMonomials,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::Rational,
        ExampleId::Anyv,
        ExampleId::Gamma,
        ExampleId::EllipticSmallA,
        ExampleId::EllipticLargeA,
        ExampleId::ShiftSumEven,
        ExampleId::ShiftSumOdd,
        ExampleId::HeltonHoweMonomials,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Rational => "rational",
            ExampleId::Anyv => "anyv",
            ExampleId::Gamma => "gamma",
            ExampleId::EllipticSmallA => "elliptic_small_a",
            ExampleId::EllipticLargeA => "elliptic_large_a",
            ExampleId::ShiftSumEven => "shift_sum_even",
            ExampleId::ShiftSumOdd => "shift_sum_odd",
            ExampleId::HeltonHoweMonomials => "helton_howe_monomials",
        }
    }
}

impl FromStr for ExampleId {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| IndexError::UnknownExample(s.to_string()))
    }
}

/// Parameters of a worked example. Unused fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleParams {
    #[serde(default)]
    pub zeros: Vec<Root>,
    #[serde(default)]
    pub poles: Vec<Root>,
    #[serde(default)]
    pub n: i64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub a: f64,
    /// For Helton-Howe monomials: the pair of powers `(m, n)` and the
    /// Fourier coefficient `h(m - n)`.
    #[serde(default)]
    pub powers: (u32, u32),
    #[serde(default)]
    pub coefficient: f64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        ExampleParams {
            zeros: Vec::new(),
            poles: Vec::new(),
            n: 0,
            alpha: 0.0,
            p: 1.0,
            a: 0.5,
            powers: (1, 1),
            coefficient: 1.0,
        }
    }
}

/// The closed-form value of a worked example.
pub fn closed_form(id: ExampleId, params: &ExampleParams) -> Result<f64, IndexError> {
    match id {
        ExampleId::Rational => Ok(rational_witten(&params.zeros, &params.poles)),
        ExampleId::Anyv => Ok(twisted_power_witten(params.n, params.alpha)),
        ExampleId::Gamma => gamma_trace(params.p),
        ExampleId::EllipticSmallA | ExampleId::EllipticLargeA => {
            let small = id == ExampleId::EllipticSmallA;
            let a = params.a;
            if !(a > 0.0) || (small && a >= 1.0) || (!small && a <= 1.0) {
                return Err(IndexError::InvalidParameter(format!(
                    "{} needs {}, got a = {a}",
                    id.name(),
                    if small { "0 < a < 1" } else { "a > 1" }
                )));
            }
            Ok(shifted_shift_root_trace(a))
        }
        ExampleId::ShiftSumEven | ExampleId::ShiftSumOdd => {
            let n = u32::try_from(params.n).unwrap_or(0);
            let even = id == ExampleId::ShiftSumEven;
            if n < 2 || (n % 2 == 0) != even {
                return Err(IndexError::InvalidParameter(format!(
                    "{} needs an {} n >= 2, got {n}",
                    id.name(),
                    if even { "even" } else { "odd" }
                )));
            }
            Ok(shift_sum_root_trace(n))
        }
        ExampleId::HeltonHoweMonomials => {
            let (m, n) = params.powers;
            Ok(m.min(n) as f64 * params.coefficient)
        }
    }
}

/// Witten index of `z^n (1 + z)^alpha`.
pub fn twisted_power_witten(n: i64, alpha: f64) -> f64 {
    -(n as f64) - 0.5 * alpha
}

/// `Tr((T_f^* T_f)^{p/2} - (T_f T_f^*)^{p/2})` for `f = 1 + e^{it}`:
/// `Gamma(1 + p) / (2 Gamma(1 + p/2)^2)`.
pub fn gamma_trace(p: f64) -> Result<f64, IndexError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(IndexError::InvalidParameter(format!("gamma example needs p > 0, got {p}")));
    }
    Ok(gamma(1.0 + p) / (2.0 * gamma(1.0 + 0.5 * p).powi(2)))
}

/// Complete elliptic integrals `(K(k), E(k))` by the arithmetic-geometric
/// mean.
pub fn complete_elliptic(k: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0, (1.0 - k * k).sqrt());
    let mut c = k;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = next_a;
        weight *= 2.0;
        sum += weight * c * c;
    }
    let big_k = PI / (2.0 * a);
    (big_k, big_k * (1.0 - sum))
}

/// `Tr(|S + a| - |S^* + a|)` for the shift `S`, from complete elliptic
/// integrals: `(2/pi) E(a)` for `a < 1` and
/// `(2/pi) a (E(1/a) - (1 - 1/a^2) K(1/a))` for `a > 1`.
pub fn shifted_shift_root_trace(a: f64) -> f64 {
    if a == 1.0 {
        2.0 / PI
    } else if a < 1.0 {
        let (_, e) = complete_elliptic(a);
        2.0 / PI * e
    } else {
        let k = 1.0 / a;
        let (big_k, e) = complete_elliptic(k);
        2.0 / PI * (e - (1.0 - k * k) * big_k) / k
    }
}

/// The same trace as an algebraic integral over `[0, 1]`, by tanh-sinh:
/// `(1/pi) int sqrt((1 - a^2 x) / (x (1 - x)))` for `a < 1` and
/// `(1/pi) int sqrt((1 - x) / (x (a^2 - x)))` for `a > 1`.
pub fn shifted_shift_root_trace_by_quadrature(a: f64) -> f64 {
    let a2 = a * a;
    let r = tanh_sinh(
        |x, da, db| {
            // da = x and db = 1 - x without cancellation.
            let v = if a <= 1.0 {
                ((1.0 - a2 * x) / (da * db)).sqrt()
            } else {
                (db / (da * (a2 - x))).sqrt()
            };
            Complex64::new(v, 0.0)
        },
        0.0,
        1.0,
        Tolerance::new(1e-15, 1e-14),
        12,
    );
    r.value.re / PI
}

/// `Tr(|T_f| - |T_f^*|)` for `f = 1 + e^{it} + ... + e^{i(n-1)t}`.
pub fn shift_sum_root_trace(n: u32) -> f64 {
    let nf = n as f64;
    if n % 2 == 0 {
        let sum: f64 = (0..n / 2)
            .map(|j| {
                let x = j as f64 + 0.5;
                (x * PI / nf).tan() / x
            })
            .sum();
        (nf - 1.0) / PI * sum
    } else {
        let sum: f64 = (1..=(n - 1) / 2).map(|j| (j as f64 * PI / nf).tan() / j as f64).sum();
        (nf - 1.0) / (2.0 * nf) + (nf - 1.0) / PI * sum
    }
}
