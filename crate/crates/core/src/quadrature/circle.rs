//! Integrals over the unit circle: plain periodic integrals, the boundary
//! side of the trace formula, the heat integral and principal-value
//! integrals of the logarithmic derivative.

use super::extrapolate::richardson_table;
use super::rules::{adaptive, periodic_mean_adaptive, tanh_sinh, Integral, Tolerance};
use super::{QuadratureError, QuadratureResult, QuadratureSettings};
use crate::funcalc::{ScalarFunction, Smoothness};
use crate::symbol::{zeros, FourierSymbol, ZeroProfile, DEFAULT_GRID};
use num_complex::Complex64;
use std::f64::consts::TAU;

const TOL: Tolerance = Tolerance::new(1e-14, 1e-13);
const MAX_PERIODIC_NODES: usize = 1 << 22;
const TANH_SINH_LEVELS: usize = 12;

/// Trapezoid rule with `nodes` points on `[0, 2pi)`, checked against the
/// rule with half as many points. With `normalized` the result is the
/// mean value, otherwise the raw integral.
pub fn circle_integral<F: FnMut(f64) -> Complex64>(
    mut integrand: F,
    nodes: usize,
    normalized: bool,
) -> Result<QuadratureResult, QuadratureError> {
    let nodes = nodes.max(2) & !1;
    let mut even = Complex64::new(0.0, 0.0);
    let mut odd = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let t = TAU * j as f64 / nodes as f64;
        let v = integrand(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(QuadratureError::NotFinite { at: t });
        }
        if j % 2 == 0 {
            even += v;
        } else {
            odd += v;
        }
    }
    let fine = (even + odd) / nodes as f64;
    let coarse = even / (nodes / 2) as f64;
    let factor = if normalized { 1.0 } else { TAU };
    Ok(QuadratureResult {
        value: fine * factor,
        abs_error_estimate: (fine - coarse).norm() * factor,
        nodes_used: nodes,
        method: "trapezoid".into(),
    })
}

/// Raw integral over one period. Smooth periodic integrands use the
/// doubling trapezoid rule; with singular angles the circle is split into
/// arcs at those angles and each arc is integrated by tanh-sinh, which
/// tolerates integrable endpoint singularities and jumps.
pub(crate) fn integrate_circle<F: FnMut(f64) -> Complex64>(
    mut integrand: F,
    singular: &[f64],
    start_nodes: usize,
) -> Integral {
    if singular.is_empty() {
        let mut r = periodic_mean_adaptive(&mut integrand, start_nodes, MAX_PERIODIC_NODES, TOL);
        r.value *= TAU;
        r.error *= TAU;
        return r;
    }
    let cuts = sorted_angles(singular);
    let mut total = Integral::zero();
    for (i, &a) in cuts.iter().enumerate() {
        let b = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + TAU };
        total.accumulate(tanh_sinh(|t, _, _| integrand(t), a, b, TOL, TANH_SINH_LEVELS));
    }
    total
}

fn sorted_angles(angles: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = angles.iter().map(|t| t.rem_euclid(TAU)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    cuts
}

/// Angles where `f` vanishes or is not smooth.
pub fn singular_angles(f: &FourierSymbol) -> Vec<f64> {
    let mut out = f.boundary_singularities();
    match f.family() {
        Some(family) => {
            if let Ok(profiles) = family.zero_profiles() {
                out.extend(profiles.iter().map(|z| z.location));
            }
        }
        None => out.extend(zeros::locate_zeros(f, DEFAULT_GRID)),
    }
    sorted_angles(&out)
}

fn smooth_at_zero(phi: &ScalarFunction) -> bool {
    match phi {
        ScalarFunction::Power { p } => p.fract() == 0.0,
        ScalarFunction::Custom(c) => c.smoothness == Smoothness::Holomorphic,
        _ => true,
    }
}

/// `(1/2 pi i) int (phi(|f|^2) - phi(0)) f'/f dt`, evaluated in the form
/// `Phi(|f|^2) conj(f) f'` with `Phi(x) = (phi(x) - phi(0))/x`, which is 0
/// where `f` vanishes.
pub fn boundary_trace_integral(
    f: &FourierSymbol,
    phi: &ScalarFunction,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult, QuadratureError> {
    phi.validate()?;
    if !phi.value_at_zero().is_finite() {
        return Err(QuadratureError::SingularAtZero(phi.label()));
    }
    let singular = if smooth_at_zero(phi) {
        f.boundary_singularities()
    } else {
        singular_angles(f)
    };
    let scale = Complex64::new(0.0, -1.0 / TAU);
    let r = integrate_circle(
        |t| {
            let (value, derivative) = f.evaluate_with_derivative(t);
            let x = value.norm_sqr();
            if x == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            scale * (phi.increment_from_zero(x) / x) * value.conj() * derivative
        },
        &singular,
        settings.circle_nodes,
    );
    check_finite(&r)?;
    Ok(QuadratureResult::from_integral(r, "boundary"))
}

/// `(1/2 pi i) int (1 - e^{-s|f|^2}) f'/f dt`, which equals
/// `Tr(e^{-sB} - e^{-sA})` exactly.
pub fn heat_integral(f: &FourierSymbol, s: f64, settings: &QuadratureSettings) -> Result<QuadratureResult, QuadratureError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(QuadratureError::SingularAtZero(format!("heat parameter {s}")));
    }
    if s == 0.0 {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            nodes_used: 0,
            method: "heat".into(),
        });
    }
    let scale = Complex64::new(0.0, -1.0 / TAU);
    let r = integrate_circle(
        |t| {
            let (value, derivative) = f.evaluate_with_derivative(t);
            let x = value.norm_sqr();
            let kernel = if x == 0.0 { s } else { -(-s * x).exp_m1() / x };
            scale * kernel * value.conj() * derivative
        },
        &f.boundary_singularities(),
        settings.circle_nodes,
    );
    check_finite(&r)?;
    Ok(QuadratureResult::from_integral(r, "heat"))
}

fn check_finite(r: &Integral) -> Result<(), QuadratureError> {
    if r.value.re.is_finite() && r.value.im.is_finite() {
        Ok(())
    } else {
        Err(QuadratureError::NotFinite { at: f64::NAN })
    }
}

fn log_derivative(f: &FourierSymbol, t: f64) -> Complex64 {
    let (value, derivative) = f.evaluate_with_derivative(t);
    derivative / value
}

/// `p.v. int f'/f dt` over the circle with the given zeros excised.
///
/// The integral is taken outside windows `(t_j - eps, t_j + eps)` for
/// `eps = eps0 2^{-k}`, `k = 0..levels`, where `eps0` is a fraction of each
/// zero's window. Symmetric excision of `g(u)/u` with smooth `g` leaves a
/// remainder in odd powers of `eps`, which Richardson extrapolation
/// removes; the error is the change made by the last elimination step.
pub fn principal_value_integral(
    f: &FourierSymbol,
    zeros: &[ZeroProfile],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult, QuadratureError> {
    let extra_cuts = f.boundary_singularities();
    if zeros.is_empty() {
        let r = integrate_circle(|t| log_derivative(f, t), &extra_cuts, settings.circle_nodes);
        check_finite(&r)?;
        return Ok(QuadratureResult::from_integral(r, "winding"));
    }
    let mut zs: Vec<ZeroProfile> = zeros.to_vec();
    zs.sort_by(|a, b| a.location.rem_euclid(TAU).total_cmp(&b.location.rem_euclid(TAU)));
    let centers: Vec<f64> = zs.iter().map(|z| z.location.rem_euclid(TAU)).collect();
    let eps0: Vec<f64> = zs.iter().map(|z| settings.eps0_fraction * z.window).collect();
    let arc = |a: f64, b: f64| -> Integral {
        let cuts: Vec<f64> = extra_cuts
            .iter()
            .flat_map(|c| [c - TAU, *c, c + TAU])
            .filter(|c| !centers.iter().any(|z| (z - c.rem_euclid(TAU)).abs() < 1e-12))
            .collect();
        adaptive(|t| log_derivative(f, t), a, b, &cuts, TOL, 4000)
    };

    let mut bulk = Integral::zero();
    for j in 0..zs.len() {
        let start = centers[j] + eps0[j];
        let (next_center, next_eps) = if j + 1 < zs.len() {
            (centers[j + 1], eps0[j + 1])
        } else {
            (centers[0] + TAU, eps0[0])
        };
        let end = next_center - next_eps;
        if end <= start {
            return Err(QuadratureError::NonConvergent("excision windows overlap".into()));
        }
        bulk.accumulate(arc(start, end));
    }

    let levels = settings.pv_levels.max(1);
    let mut values = vec![bulk.value];
    let mut quad_error = bulk.error;
    let mut evaluations = bulk.evaluations;
    let mut current = bulk.value;
    for k in 1..=levels {
        let scale_outer = 0.5f64.powi(k as i32 - 1);
        let scale_inner = 0.5f64.powi(k as i32);
        for j in 0..zs.len() {
            let (outer, inner) = (eps0[j] * scale_outer, eps0[j] * scale_inner);
            for (a, b) in [(centers[j] + inner, centers[j] + outer), (centers[j] - outer, centers[j] - inner)] {
                let r = arc(a, b);
                current += r.value;
                quad_error += r.error;
                evaluations += r.evaluations;
            }
        }
        values.push(current);
    }

    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    if steps.len() >= 2 && steps[steps.len() - 1] > 1.5 * steps[0] + 1e-12 {
        return Err(QuadratureError::NonConvergent(format!(
            "successive changes grow from {:e} to {:e}",
            steps[0],
            steps[steps.len() - 1]
        )));
    }
    let exponents: Vec<f64> = (0..levels).map(|i| (2 * i + 1) as f64).collect();
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    let ex_re = richardson_table(&re, 2.0, &exponents);
    let ex_im = richardson_table(&im, 2.0, &exponents);
    Ok(QuadratureResult {
        value: Complex64::new(ex_re.value, ex_im.value),
        abs_error_estimate: ex_re.error + ex_im.error + quad_error,
        nodes_used: evaluations,
        method: format!("principal value, {} excision levels", levels + 1),
    })
}

/// The integral divided by `2 pi i`.
pub fn normalized_pv(result: &QuadratureResult) -> Complex64 {
    result.value / Complex64::new(0.0, TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sym(pairs: &[(i64, f64)]) -> FourierSymbol {
        FourierSymbol::from_real_coefficients(pairs).unwrap()
    }

    #[test]
    fn trapezoid_examples() {
        let r = circle_integral(|t| Complex64::from_polar(1.0, t), 64, true).unwrap();
        assert!(r.value.norm() < 1e-15);
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let r = circle_integral(|t| Complex64::new(f.evaluate(t).norm_sqr(), 0.0), 64, true).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-14);
        assert!(circle_integral(|_| Complex64::new(f64::NAN, 0.0), 8, true).is_err());
    }

    #[test]
    fn boundary_examples() {
        let settings = QuadratureSettings::default();
        let shift = sym(&[(1, 1.0)]);
        let id = ScalarFunction::Power { p: 1.0 };
        let r = boundary_trace_integral(&shift, &id, &settings).unwrap();
        assert!((r.value - 1.0).norm() < 1e-13);
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let r = boundary_trace_integral(&f, &id, &settings).unwrap();
        assert!((r.value - 1.0).norm() < 1e-13);
        let r = boundary_trace_integral(&f, &ScalarFunction::Power { p: 0.5 }, &settings).unwrap();
        assert!((r.value.re - 2.0 / PI).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn heat_examples() {
        let settings = QuadratureSettings::default();
        let shift = sym(&[(1, 1.0)]);
        let r = heat_integral(&shift, 3.0, &settings).unwrap();
        assert!((r.value.re - (1.0 - (-3f64).exp())).abs() < 1e-13);
        assert_eq!(heat_integral(&shift, 0.0, &settings).unwrap().value.re, 0.0);
    }

    #[test]
    fn principal_values() {
        let settings = QuadratureSettings::default();
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let zeros = f.circle_zeros().unwrap();
        let r = principal_value_integral(&f, &zeros, &settings).unwrap();
        assert!((normalized_pv(&r) - 0.5).norm() < 1e-9, "{r:?}");
        let g = sym(&[(-2, 3.0), (0, 1.0), (1, 0.5)]);
        let r = principal_value_integral(&g, &[], &settings).unwrap();
        assert!((normalized_pv(&r) - (-2.0)).norm() < 1e-10);
    }
}
