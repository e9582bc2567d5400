//! The spectral shift function `xi` of the pair `(A, B)`, with
//! `Tr(phi(A) - phi(B)) = int phi'(x) xi(x) dx`, by three routes:
//!
//! * boundary: `xi(x) = (1/2 pi i) int_{|f|^2 > x} f'/f dt`;
//! * principal function: `xi(x) = (1/2 pi) int g(sqrt(x) e^{i theta}) d theta`;
//! * push-forward (analytic symbols): `xi(x) = (1/pi) d/dx int_{|w|^2 <= x} m(w) dA`
//!   with `m(w)` the number of preimages of `w` in the disk.

use super::{principal_function, IndexError, Route};
use crate::funcalc::{trace_phi_difference, ScalarFunction};
use crate::quadrature::circle::{boundary_trace_integral, integrate_circle};
use crate::quadrature::disk::{disk_trace_integral, DiskMode};
use crate::quadrature::rules::{adaptive, adaptive_real, gauss_legendre, Tolerance};
use crate::quadrature::QuadratureSettings;
use crate::symbol::{FourierSymbol, SymbolError, DEFAULT_GRID};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Points of the level-set scan.
pub const SCAN_POINTS: usize = 8192;
const BISECTION_STEPS: usize = 60;
const ARC_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);
/// Angular nodes on each circle of the push-forward annulus.
const ANNULUS_ANGLES: usize = 1024;
/// Radial Gauss nodes across the annulus.
const ANNULUS_RINGS: usize = 4;
/// Half-width of the annulus in `x`, relative to `sup |f|^2`.
const ANNULUS_HALF_WIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SsfRoute {
    Boundary,
    PrincipalFunction,
    Pushforward,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralShiftFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub route: SsfRoute,
    /// Imaginary part of the boundary integral at each point, which
    /// vanishes in exact arithmetic; zero for the other routes.
    pub imaginary_residual: Vec<f64>,
}

/// `|f|^2` sampled on a uniform grid, for locating the level sets
/// `|f(t)|^2 = x`.
pub struct LevelScan<'a> {
    f: &'a FourierSymbol,
    squares: Vec<f64>,
    /// `sup |f|^2`.
    pub top: f64,
}

impl<'a> LevelScan<'a> {
    pub fn new(f: &'a FourierSymbol) -> Self {
        let squares: Vec<f64> = f.sample(SCAN_POINTS).iter().map(|v| v.norm_sqr()).collect();
        let sup = f.sup_norm();
        let top = squares.iter().copied().fold(sup * sup, f64::max);
        LevelScan { f, squares, top }
    }

    fn angle(j: usize) -> f64 {
        TAU * j as f64 / SCAN_POINTS as f64
    }

    /// Angles in `[0, 2 pi)` where `|f|^2 - x` changes sign, refined by
    /// bisection.
    pub fn crossings(&self, x: f64) -> Vec<f64> {
        let m = SCAN_POINTS;
        let mut out = Vec::new();
        for j in 0..m {
            let (u, v) = (self.squares[j] - x, self.squares[(j + 1) % m] - x);
            if (u > 0.0) == (v > 0.0) {
                continue;
            }
            let (mut lo, mut hi) = (Self::angle(j), Self::angle(j) + TAU / m as f64);
            let lo_positive = u > 0.0;
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if (self.f.evaluate(mid).norm_sqr() - x > 0.0) == lo_positive {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push((0.5 * (lo + hi)).rem_euclid(TAU));
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Sampled local extrema of `|f|^2`, where `xi` may fail to be smooth.
    pub fn critical_values(&self) -> Vec<f64> {
        let m = SCAN_POINTS;
        let mut out: Vec<f64> = (0..m)
            .filter_map(|j| {
                let (prev, here, next) = (self.squares[(j + m - 1) % m], self.squares[j], self.squares[(j + 1) % m]);
                ((here >= prev && here >= next) || (here <= prev && here <= next)).then_some(here)
            })
            .filter(|&x| x > 0.0 && x < self.top)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * self.top);
        out
    }
}

fn log_derivative(f: &FourierSymbol, t: f64) -> Complex64 {
    let (value, derivative) = f.evaluate_with_derivative(t);
    derivative / value
}

/// `xi(x)` and the imaginary residual by the boundary route.
fn boundary_point(scan: &LevelScan, x: f64) -> (f64, f64) {
    if x >= scan.top {
        return (0.0, 0.0);
    }
    let f = scan.f;
    let crossings = scan.crossings(x);
    let total = if crossings.is_empty() {
        if scan.squares[0] > x {
            integrate_circle(|t| log_derivative(f, t), &f.boundary_singularities(), DEFAULT_GRID).value
        } else {
            Complex64::new(0.0, 0.0)
        }
    } else {
        let k = crossings.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..k {
            let a = crossings[i];
            let b = if i + 1 < k { crossings[i + 1] } else { crossings[0] + TAU };
            if f.evaluate(0.5 * (a + b)).norm_sqr() <= x {
                continue;
            }
            sum += adaptive(|t| log_derivative(f, t), a, b, &[], ARC_TOL, 2000).value;
        }
        sum
    };
    let normalized = total / Complex64::new(0.0, TAU);
    (normalized.re, normalized.im.abs())
}

/// `xi` on `grid` by the boundary route.
pub fn spectral_shift(f: &FourierSymbol, grid: &[f64]) -> Result<SpectralShiftFunction, IndexError> {
    check_grid(grid)?;
    let scan = LevelScan::new(f);
    let (values, imaginary_residual) = grid.iter().map(|&x| boundary_point(&scan, x)).unzip();
    Ok(SpectralShiftFunction {
        grid: grid.to_vec(),
        values,
        route: SsfRoute::Boundary,
        imaginary_residual,
    })
}

fn check_grid(grid: &[f64]) -> Result<(), IndexError> {
    match grid.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        Some(x) => Err(IndexError::InvalidParameter(format!("spectral shift grid points must be positive, got {x}"))),
        None => Ok(()),
    }
}

/// `xi` on `grid` from the principal function: the circle `|w|^2 = x`
/// is cut where it meets the curve `f(T)`, and the constant value of the
/// principal function on each arc is weighted by the arc length.
pub fn ssf_from_principal(
    f: &FourierSymbol,
    grid: &[f64],
    settings: &QuadratureSettings,
) -> Result<SpectralShiftFunction, IndexError> {
    check_grid(grid)?;
    let scan = LevelScan::new(f);
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        if x >= scan.top {
            values.push(0.0);
            continue;
        }
        let radius = x.sqrt();
        let mut angles: Vec<f64> = scan.crossings(x).iter().map(|&t| f.evaluate(t).arg().rem_euclid(TAU)).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if angles.is_empty() {
            angles.push(0.0);
        }
        let k = angles.len();
        let mut total = 0.0;
        for i in 0..k {
            let a = angles[i];
            let b = if i + 1 < k { angles[i + 1] } else { angles[0] + TAU };
            if b - a < 1e-14 {
                continue;
            }
            let g = arc_value(f, radius, a, b, settings)?;
            total += g * (b - a);
        }
        values.push(total / TAU);
    }
    Ok(SpectralShiftFunction {
        grid: grid.to_vec(),
        imaginary_residual: vec![0.0; values.len()],
        values,
        route: SsfRoute::PrincipalFunction,
    })
}

/// Principal function on the open arc `radius e^{i(a, b)}`, sampled away
/// from the curve.
fn arc_value(f: &FourierSymbol, radius: f64, a: f64, b: f64, settings: &QuadratureSettings) -> Result<f64, IndexError> {
    let mut last = None;
    for fraction in [0.5, 1.0 / 3.0, 2.0 / 3.0, 0.1, 0.9] {
        let w = Complex64::from_polar(radius, a + fraction * (b - a));
        match principal_function(f, w, settings) {
            Ok(g) => return Ok(g),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// Winding number of a closed polygon about `w`, by signed crossings of
/// the horizontal ray to the right of `w`.
fn polygon_winding(vertices: &[Complex64], w: Complex64) -> i64 {
    let m = vertices.len();
    let mut winding = 0;
    for j in 0..m {
        let (p, q) = (vertices[j] - w, vertices[(j + 1) % m] - w);
        let side = p.re * q.im - p.im * q.re;
        if p.im <= 0.0 {
            if q.im > 0.0 && side > 0.0 {
                winding += 1;
            }
        } else if q.im <= 0.0 && side < 0.0 {
            winding -= 1;
        }
    }
    winding
}

/// `xi` on `grid` as the derivative of the push-forward of area measure:
/// `(1/pi)` times the `m`-weighted area of the annulus
/// `x - h <= |w|^2 <= x + h`, divided by its width `2h`.
pub fn ssf_pushforward(f: &FourierSymbol, grid: &[f64]) -> Result<SpectralShiftFunction, IndexError> {
    check_grid(grid)?;
    if !f.is_analytic() {
        return Err(SymbolError::NotAnalytic.into());
    }
    let vertices = f.sample(SCAN_POINTS);
    let top = vertices.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let h = ANNULUS_HALF_WIDTH * top.max(f64::MIN_POSITIVE);
    let (nodes, weights) = gauss_legendre(ANNULUS_RINGS);
    let values = grid
        .iter()
        .map(|&x| {
            let (lo, hi) = ((x - h).max(0.0), x + h);
            // In u = |w|^2 the area element is (1/2) du d theta.
            let mut area = 0.0;
            for (node, weight) in nodes.iter().zip(&weights) {
                let u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * node;
                let radius = u.sqrt();
                let count: i64 = (0..ANNULUS_ANGLES)
                    .map(|j| {
                        let theta = TAU * (j as f64 + 0.5) / ANNULUS_ANGLES as f64;
                        polygon_winding(&vertices, Complex64::from_polar(radius, theta))
                    })
                    .sum();
                area += weight * 0.5 * (hi - lo) * 0.5 * TAU * count as f64 / ANNULUS_ANGLES as f64;
            }
            area / (PI * (hi - lo))
        })
        .collect::<Vec<f64>>();
    Ok(SpectralShiftFunction {
        grid: grid.to_vec(),
        imaginary_residual: vec![0.0; values.len()],
        values,
        route: SsfRoute::Pushforward,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinReport {
    pub function: String,
    /// Matrix trace, spectral-shift integral, boundary integral and, when it
    /// applies, the disk integral.
    pub routes: Vec<Route>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub agreement: bool,
}

/// `int_0^{sup |f|^2} phi'(x) xi(x) dx` with `xi` from the boundary route.
pub fn ssf_trace(f: &FourierSymbol, phi: &ScalarFunction) -> Result<Route, IndexError> {
    phi.validate()?;
    let scan = LevelScan::new(f);
    let cuts = scan.critical_values();
    let (value, error) = adaptive_real(
        |x| phi.derivative(x) * boundary_point(&scan, x).0,
        0.0,
        scan.top,
        &cuts,
        Tolerance::new(1e-11, 1e-9),
        400,
    );
    Ok(Route {
        name: "ssf_integral".into(),
        value,
        error,
    })
}

/// `Tr(phi(A) - phi(B))` by the matrix, spectral-shift, boundary and disk
/// routes; they agree when all pairwise differences are within
/// `tolerance`.
pub fn krein_check(
    f: &FourierSymbol,
    phi: &ScalarFunction,
    size: usize,
    tolerance: f64,
    settings: &QuadratureSettings,
) -> Result<KreinReport, IndexError> {
    let matrix = trace_phi_difference(f, phi, size)?;
    let mut routes = vec![
        Route {
            name: "matrix".into(),
            value: matrix.value,
            error: matrix.total_error(),
        },
        ssf_trace(f, phi)?,
    ];
    let boundary = boundary_trace_integral(f, phi, settings)?;
    routes.push(Route {
        name: "boundary".into(),
        value: boundary.value.re,
        error: boundary.abs_error_estimate,
    });
    let mode = if f.is_analytic() { DiskMode::Analytic } else { DiskMode::Harmonic };
    match disk_trace_integral(f, phi, mode, settings) {
        Ok(disk) => routes.push(Route {
            name: "disk".into(),
            value: disk.value.re,
            error: disk.abs_error_estimate,
        }),
        Err(e) => log::info!("disk route skipped: {e}"),
    }
    let mut max_discrepancy: f64 = 0.0;
    for a in &routes {
        for b in &routes {
            max_discrepancy = max_discrepancy.max((a.value - b.value).abs());
        }
    }
    Ok(KreinReport {
        function: phi.label(),
        routes,
        max_discrepancy,
        tolerance,
        agreement: max_discrepancy <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(pairs: &[(i64, f64)]) -> FourierSymbol {
        FourierSymbol::from_real_coefficients(pairs).unwrap()
    }

    /// For `f = 1 + e^{it}`, `|f|^2 = 2 + 2 cos t` and `f'/(2 pi i f)` has
    /// real part `1/(4 pi)`, while `|f|^2 > x` on an arc of length
    /// `2 acos(x/2 - 1)`.
    fn one_plus_z_xi(x: f64) -> f64 {
        (0.5 * x - 1.0).acos() / TAU
    }

    #[test]
    fn three_routes_for_one_plus_z() {
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let grid = [0.1, 0.7, 1.5, 2.0, 3.3, 3.9, 4.5];
        let settings = QuadratureSettings::default();
        let boundary = spectral_shift(&f, &grid).unwrap();
        let principal = ssf_from_principal(&f, &grid, &settings).unwrap();
        let push = ssf_pushforward(&f, &grid).unwrap();
        for (i, &x) in grid.iter().enumerate() {
            let expected = if x < 4.0 { one_plus_z_xi(x) } else { 0.0 };
            assert!((boundary.values[i] - expected).abs() < 1e-10, "{x}: {}", boundary.values[i]);
            assert!((principal.values[i] - expected).abs() < 1e-10, "{x}: {}", principal.values[i]);
            assert!((push.values[i] - expected).abs() < 5e-3, "{x}: {}", push.values[i]);
        }
    }

    #[test]
    fn shift_has_unit_ssf() {
        let f = sym(&[(1, 1.0)]);
        let r = spectral_shift(&f, &[0.25, 0.5, 0.99, 1.5]).unwrap();
        assert_eq!(r.values.iter().map(|v| v.round()).collect::<Vec<_>>(), vec![1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn krein_agreement_for_one_plus_z() {
        let f = sym(&[(0, 1.0), (1, 1.0)]);
        let settings = QuadratureSettings::default();
        for phi in [ScalarFunction::Power { p: 2.0 }, ScalarFunction::ExpHeat { s: 1.0 }] {
            let r = krein_check(&f, &phi, 64, 2e-3, &settings).unwrap();
            assert!(r.agreement, "{r:?}");
            assert_eq!(r.routes.len(), 4);
        }
    }
}
