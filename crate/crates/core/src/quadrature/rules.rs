//! One-dimensional quadrature rules shared by the circle, disk and Besov
//! integrators.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Value of a numerical integral together with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn zero() -> Self {
        Integral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        }
    }

    pub fn accumulate(&mut self, other: Integral) {
        self.value += other.value;
        self.error += other.error;
        self.evaluations += other.evaluations;
    }
}

/// Absolute and relative tolerance pair; a result is accepted when its
/// error estimate is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_1 = if n == 1 { 1.0 } else { p0 };
            derivative = n as f64 * (x * pn - pn_1) / (x * x - 1.0);
            let dx = pn / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel with the embedded 7-point Gauss rule.
pub fn kronrod_panel<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Integral {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * KRONROD_WEIGHTS[7];
    let mut gauss = f_center * GAUSS7_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * KRONROD_NODES[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += sum * KRONROD_WEIGHTS[j];
        if j % 2 == 1 {
            gauss += sum * GAUSS7_WEIGHTS[j / 2];
        }
    }
    Integral {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
        evaluations: 15,
    }
}

struct Panel {
    a: f64,
    b: f64,
    result: Integral,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.result.error == other.result.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.result.error.total_cmp(&other.result.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration over `[a, b]`, starting
/// from the panels delimited by `breakpoints` (which need not be sorted or
/// lie inside the interval).
pub fn adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> Integral {
    if a == b {
        return Integral::zero();
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > lo && *x < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in cuts.windows(2) {
        let result = kronrod_panel(&mut f, w[0], w[1]);
        evaluations += result.evaluations;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            result,
        });
    }
    loop {
        let (value, error) = heap.iter().fold((Complex64::new(0.0, 0.0), 0.0), |acc, p| {
            (acc.0 + p.result.value, acc.1 + p.result.error)
        });
        if error <= tol.target(value.norm()) || heap.len() >= max_panels {
            // Sum in interval order so the result does not depend on heap layout.
            let mut panels: Vec<Panel> = heap.into_vec();
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let mut total = Integral::zero();
            for p in panels {
                total.value += p.result.value;
                total.error += p.result.error;
            }
            total.value *= sign;
            total.evaluations = evaluations;
            return total;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            heap.push(Panel {
                a: worst.a,
                b: worst.b,
                result: Integral {
                    error: 0.0,
                    ..worst.result
                },
            });
            continue;
        }
        for (x, y) in [(worst.a, mid), (mid, worst.b)] {
            let result = kronrod_panel(&mut f, x, y);
            evaluations += result.evaluations;
            heap.push(Panel { a: x, b: y, result });
        }
    }
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> (f64, f64) {
    let r = adaptive(|x| Complex64::new(f(x), 0.0), a, b, breakpoints, tol, max_panels);
    (r.value.re, r.error)
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`, suited to
/// integrable endpoint singularities. The integrand receives the node
/// together with its distances to `a` and to `b`, computed without
/// cancellation.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_level: usize,
) -> Integral {
    let width = b - a;
    let half = 0.5 * width;
    let t_max = 4.5;
    let mut evaluations = 0;
    let eval = |tau: f64, f: &mut F| -> Complex64 {
        let u = FRAC_PI_2 * tau.sinh();
        let cosh_u = u.cosh();
        let weight = half * FRAC_PI_2 * tau.cosh() / (cosh_u * cosh_u);
        if weight == 0.0 || !weight.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let (x, da, db) = if u >= 0.0 {
            let db = width / ((2.0 * u).exp() + 1.0);
            (b - db, width - db, db)
        } else {
            let da = width / ((-2.0 * u).exp() + 1.0);
            (a + da, da, width - da)
        };
        if da <= 0.0 || db <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        f(x, da, db) * weight
    };
    let mut h = 1.0;
    let mut sum = eval(0.0, &mut f);
    evaluations += 1;
    let mut k = 1;
    while k as f64 * h <= t_max {
        let tau = k as f64 * h;
        sum += eval(tau, &mut f) + eval(-tau, &mut f);
        evaluations += 2;
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..max_level {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let tau = k as f64 * h;
            sum += eval(tau, &mut f) + eval(-tau, &mut f);
            evaluations += 2;
            k += 2;
        }
        let refined = sum * h;
        error = (refined - estimate).norm();
        estimate = refined;
        if error <= tol.target(estimate.norm()) {
            break;
        }
    }
    Integral {
        value: estimate,
        error,
        evaluations,
    }
}

/// Periodic trapezoid rule on `[0, 2*pi)` with `n` nodes, divided by `2*pi`
/// (that is, the mean value).
pub fn periodic_mean<F: FnMut(f64) -> Complex64>(f: &mut F, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        sum += f(2.0 * PI * j as f64 / n as f64);
    }
    sum / n as f64
}

/// Mean value over the circle by the trapezoid rule, doubling the node
/// count from `start` until two successive values agree to `tol`.
pub fn periodic_mean_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    start: usize,
    max_nodes: usize,
    tol: Tolerance,
) -> Integral {
    let mut n = start.max(4);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        sum += f(2.0 * PI * j as f64 / n as f64);
    }
    let mut evaluations = n;
    let mut value = sum / n as f64;
    let mut error = f64::INFINITY;
    while n < max_nodes {
        for j in 0..n {
            sum += f(2.0 * PI * (j as f64 + 0.5) / n as f64);
        }
        evaluations += n;
        n *= 2;
        let refined = sum / n as f64;
        error = (refined - value).norm();
        value = refined;
        if error <= tol.target(value.norm()) {
            break;
        }
    }
    Integral {
        value,
        error,
        evaluations,
    }
}
