//! Detection and profiling of circle zeros for coefficient symbols.

use super::{FourierSymbol, SymbolError, ZeroProfile};
use crate::quadrature::extrapolate::least_squares;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative tolerance of the power-law model `|f|^2 ~ h |t - t_j|^beta`.
pub const PROFILE_FIT_TOL: f64 = 1e-3;
/// Fitted orders within this distance of an even integer are snapped to it.
pub const ORDER_SNAP_TOL: f64 = 2e-2;
const FIT_POINTS: usize = 32;
const FIT_SPAN: f64 = 65536.0;

/// Finds the zeros of a coefficient symbol on the circle and fits a power
/// profile around each of them.
pub fn fit_circle_zeros(f: &FourierSymbol, grid: usize) -> Result<Vec<ZeroProfile>, SymbolError> {
    let locations = locate_zeros(f, grid);
    let mut profiles = Vec::with_capacity(locations.len());
    for (i, &t0) in locations.iter().enumerate() {
        let mut gap = PI;
        for (j, &other) in locations.iter().enumerate() {
            if i != j {
                gap = gap.min(super::family::wrap_angle(t0 - other).abs());
            }
        }
        profiles.push(fit_profile(f, t0, (0.45 * gap).min(0.5))?);
    }
    Ok(profiles)
}

/// Zero locations in `[0, 2pi)`, found from local minima of `|f|` on a
/// grid and refined by Newton's method on `f / f'`.
pub fn locate_zeros(f: &FourierSymbol, grid: usize) -> Vec<f64> {
    let m = grid.max(8 * (f.degree() + 1)).next_power_of_two();
    let values = f.grid_values(m);
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let l1 = f.l1_norm();
    if scale == 0.0 {
        return Vec::new();
    }
    let h = 2.0 * PI / m as f64;
    let mut found: Vec<f64> = Vec::new();
    for j in 0..m {
        let here = values[j].norm();
        let prev = values[(j + m - 1) % m].norm();
        let next = values[(j + 1) % m].norm();
        if here > prev || here > next || here > 0.1 * scale {
            continue;
        }
        let Some(t) = refine_zero(f, j as f64 * h, h) else {
            continue;
        };
        if f.series_value(t).norm() > 1e-9 * l1 {
            continue;
        }
        let t = t.rem_euclid(2.0 * PI);
        if !found.iter().any(|&u| super::family::wrap_angle(u - t).abs() < 1e-7) {
            found.push(t);
        }
    }
    found.sort_by(f64::total_cmp);
    found
}

/// Schroeder's modification of Newton's method, which converges
/// quadratically to zeros of any multiplicity.
fn refine_zero(f: &FourierSymbol, start: f64, h: f64) -> Option<f64> {
    let mut t = start;
    for _ in 0..60 {
        let v = f.series_derivative_value(t, 0);
        if v == Complex64::new(0.0, 0.0) {
            return Some(t);
        }
        let d1 = f.series_derivative_value(t, 1);
        let d2 = f.series_derivative_value(t, 2);
        let denom = d1 * d1 - v * d2;
        if denom.norm() == 0.0 {
            return None;
        }
        let step = (v * d1 / denom).re;
        let step = step.clamp(-h, h);
        t -= step;
        if (t - start).abs() > 4.0 * h {
            return None;
        }
        if step.abs() < 1e-15 * (1.0 + t.abs()) {
            break;
        }
    }
    Some(t)
}

fn fit_profile(f: &FourierSymbol, t0: f64, initial_window: f64) -> Result<ZeroProfile, SymbolError> {
    let l1 = f.l1_norm();
    let mut window = initial_window;
    for _ in 0..24 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..FIT_POINTS {
            let frac = (k as f64 / (FIT_POINTS - 1) as f64) * FIT_SPAN.ln();
            let eps = window / FIT_SPAN * frac.exp();
            for side in [-1.0, 1.0] {
                let v = f.series_value(t0 + side * eps);
                // Skip points whose value is dominated by rounding.
                if v.norm() < 1e-6 * l1 {
                    continue;
                }
                xs.push(eps.ln());
                ys.push(v.norm_sqr().ln());
            }
        }
        if xs.len() >= 8 {
            let rows: Vec<Vec<f64>> = xs.iter().map(|x| vec![1.0, *x]).collect();
            if let Some(c) = least_squares(&rows, &ys) {
                let (log_h, beta) = (c[0], c[1]);
                let worst = xs
                    .iter()
                    .zip(&ys)
                    .map(|(x, y)| (log_h + beta * x - y).exp_m1().abs())
                    .fold(0.0, f64::max);
                if worst < PROFILE_FIT_TOL && beta > 0.0 {
                    return Ok(finish_profile(f, t0, beta, log_h.exp(), window));
                }
            }
        }
        window *= 0.5;
    }
    Err(SymbolError::UnprofiledZero { location: t0 })
}

fn finish_profile(f: &FourierSymbol, t0: f64, beta: f64, h_fit: f64, window: f64) -> ZeroProfile {
    let even = (beta / 2.0).round();
    if even >= 1.0 && (beta - 2.0 * even).abs() < ORDER_SNAP_TOL {
        let m = even as usize;
        let mut factorial = 1.0;
        for k in 2..=m {
            factorial *= k as f64;
        }
        let lead = f.series_derivative_value(t0, m) / factorial;
        let eps = window / FIT_SPAN.sqrt();
        let g = eps * f.series_derivative_value(t0 + eps, 1) / f.series_value(t0 + eps);
        ZeroProfile {
            location: t0.rem_euclid(2.0 * PI),
            order: 2.0 * even,
            g_value: g,
            h_value: lead.norm_sqr(),
            window,
        }
    } else {
        let eps = window / FIT_SPAN.sqrt();
        let g = eps * f.series_derivative_value(t0 + eps, 1) / f.series_value(t0 + eps);
        ZeroProfile {
            location: t0.rem_euclid(2.0 * PI),
            order: beta,
            g_value: g,
            h_value: h_fit,
            window,
        }
    }
}
