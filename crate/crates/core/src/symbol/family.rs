//! Named parametric symbol families with closed-form evaluation.

use super::{SymbolError, ZeroProfile};
use crate::jet::Jet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance for deciding that a zero or pole lies on the unit circle.
pub const ON_CIRCLE_TOL: f64 = 1e-12;

/// A zero or pole of a rational symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Root {
    pub at: Complex64,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

fn unit_scale() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolFamily {
    /// `scale * prod (z - a_k)^{n_k} / prod (z - b_j)^{m_j}` on `|z| = 1`.
    Rational {
        #[serde(default = "unit_scale")]
        scale: Complex64,
        #[serde(default)]
        zeros: Vec<Root>,
        #[serde(default)]
        poles: Vec<Root>,
    },
    /// `e^{int} (1 + e^{it})^alpha`.
    TwistedPower { n: i64, alpha: f64 },
    /// `psi(z)^alpha` with `psi(z) = z / log(1 + z)`.
    PsiPower { alpha: f64 },
    /// `1 / (c - log psi(z))`.
    InvLogPsi { c: f64 },
    /// `sum_{k=0}^{n-1} e^{ikt}`.
    ShiftSum { n: u32 },
    /// `e^{it} + a`.
    ShiftPlus { a: Complex64 },
}

/// How the Fourier coefficients of a family decay, used to bound the
/// truncation residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Finitely many nonzero coefficients, all within `[lo, hi]`.
    Finite { lo: i64, hi: i64 },
    /// Geometric decay on both sides.
    Geometric,
    /// `|c_k| ~ k^{-exponent}`.
    Power { exponent: f64 },
    /// `|c_k| ~ 1 / (k log^2 k)`.
    LogSquared,
}

/// A point of the closed disk where a family is evaluated, carried as
/// jets of `z` and of `log(1 + z)` in a common local variable.
#[derive(Debug, Clone)]
pub struct DiskPoint {
    pub z: Jet,
    pub log_one_plus_z: Jet,
}

impl DiskPoint {
    /// Point given by a jet of `z`, with `|1 + z|` bounded away from zero.
    pub fn from_z(z: Jet) -> Self {
        let log_one_plus_z = z.add_constant(Complex64::new(1.0, 0.0)).ln();
        DiskPoint { z, log_one_plus_z }
    }

    /// The circle point `e^{it}` as a jet in the angle.
    pub fn on_circle(t: f64, order: usize) -> Self {
        let z = Jet::circle_point(t, order);
        // 1 + e^{it} = 2 cos(t/2) e^{it/2}; taking t in (-pi, pi] keeps the
        // logarithm accurate near t = pi.
        let wrapped = wrap_angle(t);
        let modulus = 2.0 * (0.5 * wrapped).cos();
        let log0 = Complex64::new(modulus.abs().ln(), 0.5 * wrapped);
        let log_one_plus_z = z.add_constant(Complex64::new(1.0, 0.0)).ln_with_constant(log0);
        DiskPoint { z, log_one_plus_z }
    }

    /// The point `z = -1 + rho e^{i phi}` with `rho = exp(log_rho)`, as a jet
    /// in the scaled variable `u` with `z = z0 + rho u`. Stays accurate for
    /// `rho` far below the floating-point resolution of `z`.
    pub fn near_minus_one(log_rho: f64, phi: f64, order: usize) -> Self {
        let rho = log_rho.exp();
        let w = Complex64::from_polar(rho, phi);
        let z = Jet::variable(Complex64::new(-1.0, 0.0) + w, Complex64::new(rho, 0.0), order);
        let log_one_plus_z = Jet::log_shifted(
            Complex64::new(log_rho, phi),
            Complex64::from_polar(1.0, -phi),
            order,
        );
        DiskPoint { z, log_one_plus_z }
    }

    pub fn order(&self) -> usize {
        self.z.order()
    }
}

/// Maps an angle to `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut x = t.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

impl SymbolFamily {
    pub fn validate(&self) -> Result<(), SymbolError> {
        let bad = |msg: String| Err(SymbolError::InvalidParameter(msg));
        match self {
            SymbolFamily::Rational { scale, zeros, poles } => {
                if !(scale.re.is_finite() && scale.im.is_finite()) || scale.norm() == 0.0 {
                    return bad("rational scale must be finite and nonzero".into());
                }
                for r in zeros.iter().chain(poles) {
                    if r.multiplicity == 0 || !r.at.re.is_finite() || !r.at.im.is_finite() {
                        return bad("roots need finite location and positive multiplicity".into());
                    }
                }
                if let Some(p) = poles.iter().find(|p| (p.at.norm() - 1.0).abs() <= ON_CIRCLE_TOL) {
                    return Err(SymbolError::PoleOnCircle { at: p.at });
                }
                Ok(())
            }
            SymbolFamily::TwistedPower { alpha, .. } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return bad(format!("twisted_power needs alpha > 0, got {alpha}"));
                }
                Ok(())
            }
            SymbolFamily::PsiPower { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return bad(format!("psi_power needs alpha > 0, got {alpha}"));
                }
                Ok(())
            }
            SymbolFamily::InvLogPsi { c } => {
                // Lambda = log(1+z)/z satisfies Re Lambda >= ln 2 on the closed
                // disk, so Re log(Lambda) >= ln(ln 2) and c > -ln(ln 2) keeps
                // the denominator away from zero.
                if !(c.is_finite() && *c > -std::f64::consts::LN_2.ln()) {
                    return bad(format!("inv_log_psi needs c > -ln(ln 2), got {c}"));
                }
                Ok(())
            }
            SymbolFamily::ShiftSum { n } => {
                if *n == 0 {
                    return bad("shift_sum needs n >= 1".into());
                }
                Ok(())
            }
            SymbolFamily::ShiftPlus { a } => {
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return bad("shift_plus needs a finite shift".into());
                }
                Ok(())
            }
        }
    }

    /// Short human-readable name with parameters.
    pub fn label(&self) -> String {
        match self {
            SymbolFamily::Rational { zeros, poles, .. } => {
                format!("rational({} zeros, {} poles)", zeros.len(), poles.len())
            }
            SymbolFamily::TwistedPower { n, alpha } => format!("twisted_power(n={n}, alpha={alpha})"),
            SymbolFamily::PsiPower { alpha } => format!("psi_power(alpha={alpha})"),
            SymbolFamily::InvLogPsi { c } => format!("inv_log_psi(c={c})"),
            SymbolFamily::ShiftSum { n } => format!("shift_sum(n={n})"),
            SymbolFamily::ShiftPlus { a } => format!("shift_plus(a={}{:+}i)", a.re, a.im),
        }
    }

    /// Whether the family extends holomorphically into the disk
    /// (no negative Fourier coefficients).
    pub fn is_analytic(&self) -> bool {
        match self {
            SymbolFamily::Rational { poles, .. } => poles.iter().all(|p| p.at.norm() > 1.0),
            SymbolFamily::TwistedPower { n, .. } => *n >= 0,
            _ => true,
        }
    }

    pub fn decay(&self) -> Decay {
        match self {
            SymbolFamily::Rational { zeros, poles, .. } => {
                if poles.is_empty() {
                    let deg: i64 = zeros.iter().map(|r| r.multiplicity as i64).sum();
                    Decay::Finite { lo: 0, hi: deg }
                } else {
                    Decay::Geometric
                }
            }
            SymbolFamily::TwistedPower { n, alpha } => {
                if alpha.fract() == 0.0 {
                    Decay::Finite { lo: *n, hi: n + *alpha as i64 }
                } else {
                    Decay::Power { exponent: 1.0 + alpha }
                }
            }
            SymbolFamily::PsiPower { .. } | SymbolFamily::InvLogPsi { .. } => Decay::LogSquared,
            SymbolFamily::ShiftSum { n } => Decay::Finite { lo: 0, hi: *n as i64 - 1 },
            SymbolFamily::ShiftPlus { .. } => Decay::Finite { lo: 0, hi: 1 },
        }
    }

    /// Exact Fourier coefficients when they are available in closed form,
    /// as `(lowest index, coefficients)` restricted to `[-degree, degree]`.
    pub fn exact_coefficients(&self, degree: usize) -> Option<(i64, Vec<Complex64>)> {
        let d = degree as i64;
        let one = Complex64::new(1.0, 0.0);
        match self {
            SymbolFamily::TwistedPower { n, alpha } => {
                // (1+z)^alpha = sum binom(alpha, k) z^k.
                let lo = (*n).max(-d);
                let hi = d;
                if lo > hi {
                    return Some((0, vec![Complex64::new(0.0, 0.0)]));
                }
                let mut out = Vec::with_capacity((hi - lo + 1) as usize);
                let mut binom = 1.0;
                let mut k = 0i64;
                let limit = if alpha.fract() == 0.0 { *alpha as i64 } else { i64::MAX };
                while n + k <= hi {
                    if n + k >= lo {
                        out.push(Complex64::new(if k <= limit { binom } else { 0.0 }, 0.0));
                    }
                    binom *= (alpha - k as f64) / (k as f64 + 1.0);
                    k += 1;
                }
                Some((lo, out))
            }
            SymbolFamily::ShiftSum { n } => {
                let hi = (*n as i64 - 1).min(d);
                Some((0, vec![one; (hi + 1) as usize]))
            }
            SymbolFamily::ShiftPlus { a } => {
                if d == 0 {
                    Some((0, vec![*a]))
                } else {
                    Some((0, vec![*a, one]))
                }
            }
            SymbolFamily::Rational { scale, zeros, poles } if poles.is_empty() => {
                let mut poly = vec![*scale];
                for r in zeros {
                    for _ in 0..r.multiplicity {
                        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                        for (k, c) in poly.iter().enumerate() {
                            next[k + 1] += c;
                            next[k] -= c * r.at;
                        }
                        poly = next;
                    }
                }
                poly.truncate((d + 1) as usize);
                Some((0, poly))
            }
            _ => None,
        }
    }

    /// Evaluates the family at a disk point, returning the jet of `F`.
    pub fn eval_jet(&self, p: &DiskPoint) -> Jet {
        let order = p.order();
        let one = Complex64::new(1.0, 0.0);
        match self {
            SymbolFamily::TwistedPower { n, alpha } => {
                let power = p.log_one_plus_z.scale(Complex64::new(*alpha, 0.0)).exp();
                if *n == 0 {
                    power
                } else {
                    &p.z.powi(*n) * &power
                }
            }
            SymbolFamily::Rational { scale, zeros, poles } => {
                let mut acc = Jet::constant(*scale, order);
                for (roots, sign) in [(zeros, 1i64), (poles, -1i64)] {
                    for r in roots {
                        let m = sign * r.multiplicity as i64;
                        let factor = if r.at == Complex64::new(-1.0, 0.0) {
                            p.log_one_plus_z.scale(Complex64::new(m as f64, 0.0)).exp()
                        } else {
                            p.z.add_constant(-r.at).powi(m)
                        };
                        acc = &acc * &factor;
                    }
                }
                acc
            }
            SymbolFamily::PsiPower { alpha } => {
                let log_lambda = log_of_log_ratio(p);
                log_lambda.scale(Complex64::new(-alpha, 0.0)).exp()
            }
            SymbolFamily::InvLogPsi { c } => {
                let log_lambda = log_of_log_ratio(p);
                log_lambda.add_constant(Complex64::new(*c, 0.0)).recip()
            }
            SymbolFamily::ShiftSum { n } => p.z.compose_series(&vec![one; *n as usize]),
            SymbolFamily::ShiftPlus { a } => p.z.add_constant(*a),
        }
    }

    /// `F(e^{it})` and its first `order` derivatives in `t`.
    pub fn circle_jet(&self, t: f64, order: usize) -> Jet {
        self.eval_jet(&DiskPoint::on_circle(t, order))
    }

    pub fn value(&self, t: f64) -> Complex64 {
        self.circle_jet(t, 0).value()
    }

    /// Points on the circle (as angles in `[0, 2pi)`) where the family is
    /// not smooth.
    pub fn boundary_singularities(&self) -> Vec<f64> {
        match self {
            SymbolFamily::TwistedPower { alpha, .. } if alpha.fract() != 0.0 => vec![PI],
            SymbolFamily::PsiPower { .. } | SymbolFamily::InvLogPsi { .. } => vec![PI],
            _ => Vec::new(),
        }
    }

    /// Zeros of the holomorphic extension inside the open disk, with
    /// multiplicities. Only meaningful for analytic families.
    pub fn interior_zeros(&self) -> Vec<Root> {
        match self {
            SymbolFamily::TwistedPower { n, .. } if *n > 0 => vec![Root {
                at: Complex64::new(0.0, 0.0),
                multiplicity: *n as u32,
            }],
            SymbolFamily::Rational { zeros, .. } => {
                zeros.iter().filter(|r| r.at.norm() < 1.0 - ON_CIRCLE_TOL).copied().collect()
            }
            SymbolFamily::ShiftPlus { a } if a.norm() < 1.0 - ON_CIRCLE_TOL => vec![Root {
                at: -a,
                multiplicity: 1,
            }],
            _ => Vec::new(),
        }
    }

    /// Exact zero profiles on the circle, or an error when a zero is not of
    /// power type.
    pub fn zero_profiles(&self) -> Result<Vec<ZeroProfile>, SymbolError> {
        match self {
            SymbolFamily::TwistedPower { alpha, .. } => Ok(vec![ZeroProfile {
                location: PI,
                order: 2.0 * alpha,
                g_value: Complex64::new(*alpha, 0.0),
                h_value: 1.0,
                window: PI / 2.0,
            }]),
            SymbolFamily::PsiPower { .. } | SymbolFamily::InvLogPsi { .. } => {
                Err(SymbolError::UnprofiledZero { location: PI })
            }
            SymbolFamily::ShiftSum { n } => {
                let n = *n as usize;
                Ok((1..n)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / n as f64;
                        let w = Complex64::from_polar(1.0, t);
                        ZeroProfile {
                            location: t,
                            order: 2.0,
                            g_value: Complex64::new(1.0, 0.0),
                            h_value: (n * n) as f64 / (w - 1.0).norm_sqr(),
                            window: PI / n as f64,
                        }
                    })
                    .collect())
            }
            SymbolFamily::ShiftPlus { a } => {
                if (a.norm() - 1.0).abs() <= ON_CIRCLE_TOL {
                    Ok(vec![ZeroProfile {
                        location: (-a).arg().rem_euclid(2.0 * PI),
                        order: 2.0,
                        g_value: Complex64::new(1.0, 0.0),
                        h_value: 1.0,
                        window: PI / 2.0,
                    }])
                } else {
                    Ok(Vec::new())
                }
            }
            SymbolFamily::Rational { scale, zeros, poles } => {
                let on_circle: Vec<&Root> = zeros
                    .iter()
                    .filter(|r| (r.at.norm() - 1.0).abs() <= ON_CIRCLE_TOL)
                    .collect();
                let angles: Vec<f64> = on_circle.iter().map(|r| r.at.arg().rem_euclid(2.0 * PI)).collect();
                let mut out = Vec::new();
                for (i, r) in on_circle.iter().enumerate() {
                    let mut gap = PI;
                    for (j, other) in angles.iter().enumerate() {
                        if i != j {
                            let d = wrap_angle(angles[i] - other).abs();
                            gap = gap.min(d);
                        }
                    }
                    let a = r.at / r.at.norm();
                    let mut k = *scale;
                    for other in zeros.iter().filter(|o| !std::ptr::eq(*o, *r)) {
                        k *= (a - other.at).powi(other.multiplicity as i32);
                    }
                    for p in poles {
                        k /= (a - p.at).powi(p.multiplicity as i32);
                    }
                    out.push(ZeroProfile {
                        location: angles[i],
                        order: 2.0 * r.multiplicity as f64,
                        g_value: Complex64::new(r.multiplicity as f64, 0.0),
                        h_value: k.norm_sqr(),
                        window: (0.45 * gap).min(PI / 2.0),
                    });
                }
                Ok(out)
            }
        }
    }

    /// The Witten index in closed form where one is known: `-n - alpha/2`
    /// for twisted powers and the root-counting formula for rational
    /// symbols (the shift families are rational).
    pub fn witten_closed_form(&self) -> Option<f64> {
        match self {
            SymbolFamily::TwistedPower { n, alpha } => Some(-(*n as f64) - alpha / 2.0),
            SymbolFamily::Rational { zeros, poles, .. } => Some(rational_witten(zeros, poles)),
            SymbolFamily::ShiftSum { n } => Some(-(*n as f64 - 1.0) / 2.0),
            SymbolFamily::ShiftPlus { a } => {
                let r = a.norm();
                Some(if (r - 1.0).abs() <= ON_CIRCLE_TOL {
                    -0.5
                } else if r < 1.0 {
                    -1.0
                } else {
                    0.0
                })
            }
            _ => None,
        }
    }
}

/// `sum_{|b|<1} m - sum_{|a|<1} n - (1/2) sum_{|a|=1} n`.
pub fn rational_witten(zeros: &[Root], poles: &[Root]) -> f64 {
    let mut total = 0.0;
    for p in poles {
        if p.at.norm() < 1.0 {
            total += p.multiplicity as f64;
        }
    }
    for z in zeros {
        let r = z.at.norm();
        if (r - 1.0).abs() <= ON_CIRCLE_TOL {
            total -= 0.5 * z.multiplicity as f64;
        } else if r < 1.0 {
            total -= z.multiplicity as f64;
        }
    }
    total
}

/// Jet of `Log(log(1+z)/z)`. The ratio has positive real part on the
/// closed disk minus `-1`, so the principal logarithm is continuous.
fn log_of_log_ratio(p: &DiskPoint) -> Jet {
    let z0 = p.z.value();
    if z0.norm() < 0.5 {
        // log(1+z)/z = sum (-z)^k / (k+1)
        let series: Vec<Complex64> = (0..64)
            .map(|k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0), 0.0))
            .collect();
        p.z.compose_series(&series).ln()
    } else {
        // Subtract the logarithms so that huge |log(1+z)| stays representable.
        let log_num = p.log_one_plus_z.ln();
        let log_den = p.z.ln();
        &log_num - &log_den
    }
}
