//! Disk side of the trace formula:
//! `(1/pi) int_D phi'(|F|^2) (|P'|^2 - |Q'|^2) dA` for the harmonic extension
//! `P + conj(Q)` of the symbol, which reduces to `|F'|^2` for analytic
//! symbols.
//!
//! The integral is computed in polar coordinates as an adaptive outer
//! integral over the angle of adaptive inner integrals over the radius,
//! with breakpoints at boundary singularities, circle zeros and interior
//! zeros of `F`.

use super::rules::{adaptive, Integral, Tolerance};
use super::{QuadratureError, QuadratureResult, QuadratureSettings};
use crate::funcalc::ScalarFunction;
use crate::linalg;
use crate::symbol::{FourierSymbol, SymbolError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

const INNER_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);
const OUTER_TOL: Tolerance = Tolerance::new(1e-11, 1e-10);
const OUTER_PANELS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskMode {
    Harmonic,
    Analytic,
}

/// Value of the extension with `|P'|^2 - |Q'|^2` at a disk point.
type Evaluation = Box<dyn Fn(Complex64) -> (Complex64, f64) + Sync + Send>;

fn evaluator(f: &FourierSymbol, mode: DiskMode) -> Result<Evaluation, QuadratureError> {
    if f.is_analytic() {
        let f = f.clone();
        return Ok(Box::new(move |z| match f.analytic_jet(z, Complex64::new(1.0, 0.0), 1) {
            Ok(jet) => (jet.value(), jet.coeff(1).norm_sqr()),
            Err(_) => (Complex64::new(f64::NAN, 0.0), f64::NAN),
        }));
    }
    if mode == DiskMode::Analytic {
        return Err(SymbolError::NotAnalytic.into());
    }
    let (plus, minus) = f.split_parts();
    Ok(Box::new(move |z| {
        let zc = z.conj();
        let (p, dp) = value_and_derivative(&plus, z);
        // The anti-analytic part is sum_{n>=1} c_{-n} conj(z)^n.
        let (q, dq) = value_and_derivative(&minus, zc);
        let anti = zc * q;
        let anti_derivative = q + zc * dq;
        (p + anti, dp.norm_sqr() - anti_derivative.norm_sqr())
    }))
}

fn value_and_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut derivative = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        derivative = derivative * z + value;
        value = value * z + c;
    }
    (value, derivative)
}

/// Zeros of the holomorphic extension inside the disk.
fn interior_zeros(f: &FourierSymbol) -> Vec<Complex64> {
    if !f.is_analytic() {
        return Vec::new();
    }
    if let Some(family) = f.family() {
        return family.interior_zeros().iter().map(|r| r.at).collect();
    }
    let coeffs: Vec<Complex64> = (0..=f.max_index().max(0)).map(|k| f.coeff(k)).collect();
    linalg::polynomial_roots(&coeffs)
        .unwrap_or_default()
        .into_iter()
        .filter(|r| r.norm() < 1.0)
        .collect()
}

fn derivative_singular_at_zero(phi: &ScalarFunction) -> bool {
    matches!(phi, ScalarFunction::Power { p } if *p < 1.0)
}

pub fn disk_trace_integral(
    f: &FourierSymbol,
    phi: &ScalarFunction,
    mode: DiskMode,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult, QuadratureError> {
    phi.validate()?;
    let eval = evaluator(f, mode)?;
    let mut angle_cuts = f.boundary_singularities();
    let mut radius_cuts = Vec::new();
    if derivative_singular_at_zero(phi) {
        if mode == DiskMode::Harmonic && !f.is_analytic() {
            return Err(QuadratureError::NonExcisable(format!(
                "{} has an unbounded derivative at 0 and the zero set of a harmonic extension is not located",
                phi.label()
            )));
        }
        angle_cuts.extend(super::circle::singular_angles(f));
        for a in interior_zeros(f) {
            if a.norm() > 1e-14 {
                angle_cuts.push(a.arg().rem_euclid(TAU));
                radius_cuts.push(a.norm());
            }
        }
    }
    let density = |z: Complex64| -> Complex64 {
        let (value, jacobian) = eval(z);
        let x = value.norm_sqr();
        if jacobian == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(phi.derivative(x) * jacobian / PI, 0.0)
    };
    let mut inner_evaluations = 0usize;
    let mut inner_error = 0.0;
    let outer = adaptive(
        |theta| {
            let direction = Complex64::from_polar(1.0, theta);
            let r = adaptive(
                |radius| density(direction * radius) * radius,
                0.0,
                1.0,
                &radius_cuts,
                INNER_TOL,
                settings.rings,
            );
            inner_evaluations += r.evaluations;
            inner_error += r.error;
            r.value
        },
        0.0,
        TAU,
        &angle_cuts,
        OUTER_TOL,
        OUTER_PANELS,
    );
    let total = Integral {
        value: outer.value,
        error: outer.error + inner_error / outer.evaluations.max(1) as f64 * TAU,
        evaluations: inner_evaluations,
    };
    if !(total.value.re.is_finite() && total.value.im.is_finite()) {
        return Err(QuadratureError::NonExcisable(format!(
            "disk integral of {} is not finite",
            phi.label()
        )));
    }
    Ok(QuadratureResult::from_integral(
        total,
        match mode {
            DiskMode::Harmonic => "disk, harmonic extension",
            DiskMode::Analytic => "disk, analytic extension",
        },
    ))
}

/// `(m n / pi) int_D h(z) z^{n-1} conj(z)^{m-1} dA` for the harmonic
/// extension `h` of the weight, which equals
/// `Tr(T_h [T_{e_{-m}}, T_{e_n}])`.
pub fn monomial_commutator_integral(
    h: &FourierSymbol,
    m: u32,
    n: u32,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult, QuadratureError> {
    if m == 0 || n == 0 {
        return Ok(QuadratureResult::from_integral(
            Integral { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 },
            "disk, monomial commutator",
        ));
    }
    let weight = (m as f64) * (n as f64) / PI;
    let mut failure = None;
    let mut inner_evaluations = 0usize;
    let mut inner_error = 0.0;
    let outer = adaptive(
        |theta| {
            let direction = Complex64::from_polar(1.0, theta);
            let r = adaptive(
                |radius| {
                    let z = direction * radius;
                    match h.harmonic_extension(z) {
                        Ok(v) => v * z.powu(n - 1) * z.conj().powu(m - 1) * radius * weight,
                        Err(e) => {
                            failure.get_or_insert(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                0.0,
                1.0,
                &[],
                INNER_TOL,
                settings.rings,
            );
            inner_evaluations += r.evaluations;
            inner_error += r.error;
            r.value
        },
        0.0,
        TAU,
        &h.boundary_singularities(),
        OUTER_TOL,
        OUTER_PANELS,
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    let total = Integral {
        value: outer.value,
        error: outer.error + inner_error / outer.evaluations.max(1) as f64 * TAU,
        evaluations: inner_evaluations,
    };
    Ok(QuadratureResult::from_integral(total, "disk, monomial commutator"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(pairs: &[(i64, f64)]) -> FourierSymbol {
        FourierSymbol::from_real_coefficients(pairs).unwrap()
    }

    #[test]
    fn shift_has_unit_area() {
        let settings = QuadratureSettings::default();
        let phi = ScalarFunction::Power { p: 1.0 };
        for mode in [DiskMode::Analytic, DiskMode::Harmonic] {
            let r = disk_trace_integral(&sym(&[(1, 1.0)]), &phi, mode, &settings).unwrap();
            assert!((r.value.re - 1.0).abs() < 1e-12);
        }
        let back = sym(&[(-1, 1.0)]);
        let r = disk_trace_integral(&back, &phi, DiskMode::Harmonic, &settings).unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-12);
        assert!(disk_trace_integral(&back, &phi, DiskMode::Analytic, &settings).is_err());
    }

    #[test]
    fn square_root_and_square() {
        let settings = QuadratureSettings::default();
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let r = disk_trace_integral(&f, &ScalarFunction::Power { p: 0.5 }, DiskMode::Analytic, &settings).unwrap();
        assert!((r.value.re - 2.0 / PI).abs() < 1e-8, "{r:?}");
        let r = disk_trace_integral(&f, &ScalarFunction::Power { p: 2.0 }, DiskMode::Analytic, &settings).unwrap();
        assert!((r.value.re - 3.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn monomial_commutator_picks_one_coefficient() {
        let settings = QuadratureSettings::default();
        let h = sym(&[(0, 0.5), (1, 1.0), (-2, 3.0)]);
        let r = monomial_commutator_integral(&h, 3, 2, &settings).unwrap();
        assert!((r.value - Complex64::new(2.0, 0.0)).norm() < 1e-10, "{r:?}");
        let r = monomial_commutator_integral(&h, 2, 4, &settings).unwrap();
        assert!((r.value - Complex64::new(6.0, 0.0)).norm() < 1e-10, "{r:?}");
    }
}
