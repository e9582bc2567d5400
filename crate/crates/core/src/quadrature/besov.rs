//! Membership of analytic symbols in the Besov class `B_p^{1/p}`, tested
//! through the weighted disk integral
//! `int_D |(1 - |z|^2)^n F^{(n)}(z)|^p (1 - |z|^2)^{-2} dA(z)`.
//!
//! Away from boundary singularities the integral is computed directly. At
//! the singular point `-1` the disk is parametrized by
//! `z = -1 + rho e^{i phi}` with `L = -ln(rho)`, where the integral becomes
//! `int Phi(L) dL` with
//! `Phi(L) = int |(2 cos(phi) - rho)^n n! c_n|^p (2 cos(phi) - rho)^{-2} dphi`
//! and `c_n` the `n`-th Taylor coefficient of `F(z + rho u)`. Its decay in
//! `L` decides convergence: `Phi ~ L^{-a}` is integrable iff `a > 1`.

use super::extrapolate::least_squares;
use super::rules::{adaptive, adaptive_real, tanh_sinh, Integral, Tolerance};
use super::{QuadratureError, QuadratureResult, QuadratureSettings};
use crate::symbol::family::DiskPoint;
use crate::symbol::{FourierSymbol, SymbolError, SymbolFamily};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Radius of the local region around the singular point.
const LOCAL_RADIUS: f64 = 0.5;
/// Largest `L = -ln(rho)` sampled.
const MAX_LOG_DEPTH: f64 = 1e100;
/// Decay exponents above this are convergent, below
/// [`DIVERGENT_BELOW`] divergent, in between marginal.
const FINITE_ABOVE: f64 = 1.05;
const DIVERGENT_BELOW: f64 = 0.95;
/// Fraction of the `ln L` range, at its top, used for the decay fit.
const FIT_FRACTION: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesovVerdict {
    Finite,
    Divergent,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovReport {
    pub p: f64,
    pub n: usize,
    pub verdict: BesovVerdict,
    /// The integral, when it converges.
    pub value: Option<QuadratureResult>,
    /// Fitted exponent `a` of `Phi(L) ~ L^{-a}` at the boundary singularity;
    /// infinite when `Phi` decays faster than any power (or there is no
    /// singularity).
    pub decay_exponent: f64,
}

fn pow_weight(w: Complex64, p: f64) -> f64 {
    let m = w.norm();
    if m == 0.0 {
        0.0
    } else {
        m.powf(p)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Phi(L)` for a family singular at `-1`.
fn local_profile(family: &SymbolFamily, p: f64, n: usize, depth: f64) -> Integral {
    let rho = (-depth).exp();
    let half_width = (0.5 * rho).acos();
    let nf = factorial(n);
    tanh_sinh(
        |phi, da, db| {
            // 2 cos(phi) - rho vanishes linearly at both ends; recover it
            // from the distance to the nearer endpoint without cancellation.
            let edge = da.min(db);
            let versine = 2.0 * (0.5 * edge).sin().powi(2);
            let chord = (2.0 * (half_width.sin() * edge.sin() - half_width.cos() * versine)).max(0.0);
            let point = DiskPoint::near_minus_one(-depth, phi, n);
            let jet = family.eval_jet(&point);
            let c = jet.coeff(n);
            let w = pow_weight(c * nf, p) * chord.powf(n as f64 * p - 2.0);
            Complex64::new(w, 0.0)
        },
        -half_width,
        half_width,
        Tolerance::new(1e-300, 1e-10),
        10,
    )
}

/// Inner radial interval(s) on the ray of angle `theta` that lie outside
/// the local disk `|z + 1| < LOCAL_RADIUS`.
fn ray_outside_local(theta: f64, local: bool) -> Vec<(f64, f64)> {
    if !local {
        return vec![(0.0, 1.0)];
    }
    let c = theta.cos();
    let disc = c * c - 1.0 + LOCAL_RADIUS * LOCAL_RADIUS;
    if c >= 0.0 || disc <= 0.0 {
        return vec![(0.0, 1.0)];
    }
    let r1 = -c - disc.sqrt();
    let r2 = -c + disc.sqrt();
    let mut out = Vec::new();
    if r1 > 0.0 {
        out.push((0.0, r1.min(1.0)));
    }
    if r2 < 1.0 {
        out.push((r2.max(0.0), 1.0));
    }
    out
}

fn bulk_integral(f: &FourierSymbol, p: f64, n: usize, local: bool, settings: &QuadratureSettings) -> Integral {
    let exponent = n as f64 * p - 2.0;
    let one = Complex64::new(1.0, 0.0);
    // Angles where the ray becomes tangent to the local disk and where the
    // local disk meets the unit circle.
    let tangent = (1.0 - LOCAL_RADIUS * LOCAL_RADIUS).sqrt().acos();
    let meet = (0.5 * (LOCAL_RADIUS * LOCAL_RADIUS - 2.0)).acos();
    let cuts = if local {
        vec![PI - tangent, PI + tangent, PI - meet, PI + meet, PI]
    } else {
        Vec::new()
    };
    let mut inner_error = 0.0;
    let outer = adaptive(
        |theta| {
            let direction = Complex64::from_polar(1.0, theta);
            let mut total = Complex64::new(0.0, 0.0);
            for (a, b) in ray_outside_local(theta, local) {
                let r = if b == 1.0 {
                    tanh_sinh(
                        |r, _, to_edge| {
                            let derivative = f
                                .analytic_jet(direction * r, one, n)
                                .map(|j| j.derivative(n))
                                .unwrap_or(Complex64::new(0.0, 0.0));
                            let weight = to_edge * (1.0 + r);
                            Complex64::new(pow_weight(derivative, p) * weight.powf(exponent) * r, 0.0)
                        },
                        a,
                        b,
                        Tolerance::new(1e-14, 1e-11),
                        10,
                    )
                } else {
                    adaptive(
                        |r| {
                            let derivative = f
                                .analytic_jet(direction * r, one, n)
                                .map(|j| j.derivative(n))
                                .unwrap_or(Complex64::new(0.0, 0.0));
                            Complex64::new(pow_weight(derivative, p) * (1.0 - r * r).powf(exponent) * r, 0.0)
                        },
                        a,
                        b,
                        &[],
                        Tolerance::new(1e-14, 1e-11),
                        settings.rings,
                    )
                };
                inner_error += r.error;
                total += r.value;
            }
            total
        },
        0.0,
        TAU,
        &cuts,
        Tolerance::new(1e-12, 1e-9),
        1000,
    );
    Integral {
        value: outer.value,
        error: outer.error + inner_error / outer.evaluations.max(1) as f64 * TAU,
        evaluations: outer.evaluations,
    }
}

/// Besov integral of an analytic symbol with verdict. Requires `p n > 1`.
pub fn besov_integral(
    f: &FourierSymbol,
    p: f64,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<BesovReport, QuadratureError> {
    if !(p > 0.0 && p.is_finite()) || p * n as f64 <= 1.0 {
        return Err(QuadratureError::BesovHypothesis { p, n });
    }
    if !f.is_analytic() {
        return Err(SymbolError::NotAnalytic.into());
    }
    let singular = f.boundary_singularities();
    let family = f.family().cloned();
    let local = !singular.is_empty();
    if !local && f.is_exact() {
        // A polynomial: evaluate from its coefficients, where derivatives
        // above the degree vanish exactly instead of at rounding level,
        // which x^p would amplify.
        if n as i64 > f.max_index() {
            return Ok(BesovReport {
                p,
                n,
                verdict: BesovVerdict::Finite,
                value: Some(QuadratureResult::from_integral(Integral::zero(), "besov, vanishing derivative")),
                decay_exponent: f64::INFINITY,
            });
        }
        let bulk = bulk_integral(&f.truncated(), p, n, false, settings);
        return Ok(BesovReport {
            p,
            n,
            verdict: BesovVerdict::Finite,
            value: Some(QuadratureResult::from_integral(bulk, "besov")),
            decay_exponent: f64::INFINITY,
        });
    }
    if local && (singular.len() != 1 || (singular[0] - PI).abs() > 1e-12) {
        return Err(QuadratureError::NonExcisable(
            "Besov integrals handle a single boundary singularity at -1".into(),
        ));
    }
    let bulk = bulk_integral(f, p, n, local, settings);
    let mut decay_exponent = f64::INFINITY;
    let mut local_value = Integral::zero();
    if let (true, Some(family)) = (local, family.as_ref()) {
        let start = -(LOCAL_RADIUS.ln());
        // Decay fit on L = start * 2^{k/2}.
        let mut depths = Vec::new();
        let mut profile = Vec::new();
        let mut depth = start;
        while depth <= MAX_LOG_DEPTH {
            depths.push(depth);
            profile.push(local_profile(family, p, n, depth).value.re);
            depth *= std::f64::consts::SQRT_2;
        }
        let top = depths.last().unwrap().ln();
        let bottom = top - FIT_FRACTION * (top - start.ln());
        let (mut rows, mut ys) = (Vec::new(), Vec::new());
        let mut underflow = false;
        for (d, v) in depths.iter().zip(&profile) {
            if d.ln() >= bottom {
                if *v <= 0.0 {
                    underflow = true;
                    break;
                }
                rows.push(vec![1.0, d.ln()]);
                ys.push(v.ln());
            }
        }
        if !underflow {
            let fit = least_squares(&rows, &ys).ok_or_else(|| {
                QuadratureError::NonConvergent("decay fit of the local profile failed".into())
            })?;
            decay_exponent = -fit[1];
        }
        let verdict = classify(decay_exponent);
        if verdict != BesovVerdict::Finite {
            return Ok(BesovReport {
                p,
                n,
                verdict,
                value: None,
                decay_exponent,
            });
        }
        // int Phi(L) dL over [start, L_max] in v = ln L, plus a power tail.
        let (lo, hi) = (start.ln(), MAX_LOG_DEPTH.ln());
        let (body, body_error) = adaptive_real(
            |v| {
                let d = v.exp();
                local_profile(family, p, n, d).value.re * d
            },
            lo,
            hi,
            &[],
            Tolerance::new(1e-12, 1e-9),
            400,
        );
        let last = *profile.last().unwrap();
        let tail = if decay_exponent.is_finite() {
            last * depths.last().unwrap() / (decay_exponent - 1.0)
        } else {
            0.0
        };
        local_value = Integral {
            value: Complex64::new(body + tail, 0.0),
            error: body_error + tail.abs(),
            evaluations: 0,
        };
    }
    let mut total = bulk;
    total.accumulate(local_value);
    Ok(BesovReport {
        p,
        n,
        verdict: BesovVerdict::Finite,
        value: Some(QuadratureResult::from_integral(total, "besov")),
        decay_exponent,
    })
}

fn classify(exponent: f64) -> BesovVerdict {
    if exponent > FINITE_ABOVE {
        BesovVerdict::Finite
    } else if exponent < DIVERGENT_BELOW {
        BesovVerdict::Divergent
    } else {
        BesovVerdict::Marginal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::TruncationMode;

    #[test]
    fn rejects_small_pn() {
        let f = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        assert!(matches!(
            besov_integral(&f, 0.5, 2, &QuadratureSettings::default()),
            Err(QuadratureError::BesovHypothesis { .. })
        ));
    }

    #[test]
    fn monomial_value() {
        // F = z, n = 1: int (1 - r^2)^{p-2} dA = pi / (p - 1).
        let f = FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap();
        let r = besov_integral(&f, 3.0, 1, &QuadratureSettings::default()).unwrap();
        let v = r.value.unwrap().value.re;
        assert!((v - PI / 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn polynomial_with_vanishing_derivative() {
        let f = FourierSymbol::from_family(SymbolFamily::TwistedPower { n: 0, alpha: 1.0 }, 64, TruncationMode::Raw).unwrap();
        let r = besov_integral(&f, 0.5, 4, &QuadratureSettings::default()).unwrap();
        assert_eq!(r.verdict, BesovVerdict::Finite);
        assert_eq!(r.value.unwrap().value.re, 0.0);
    }

    #[test]
    fn powers_of_one_plus_z_are_finite() {
        let f = FourierSymbol::from_family(SymbolFamily::TwistedPower { n: 0, alpha: 0.5 }, 64, TruncationMode::Raw).unwrap();
        let r = besov_integral(&f, 0.5, 4, &QuadratureSettings::default()).unwrap();
        assert_eq!(r.verdict, BesovVerdict::Finite);
        assert!(r.value.unwrap().value.re.is_finite());
    }
}
