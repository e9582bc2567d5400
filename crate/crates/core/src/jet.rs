//! Truncated complex Taylor series ("jets").
//!
//! A jet of order `k` stores the coefficients `c_0..=c_k` of a function
//! `g(z0 + s*u) = sum c_j u^j + O(u^{k+1})` in a local variable `u`. The
//! scale `s` is implicit: all arithmetic is scale-agnostic, and callers
//! convert back with `c_j = s^j g^{(j)}(z0) / j!`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least a constant term");
        Jet { coeffs }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The jet of the identity map `z0 + s*u`.
    pub fn variable(z0: Complex64, scale: Complex64, order: usize) -> Self {
        let mut jet = Jet::constant(z0, order);
        if order >= 1 {
            jet.coeffs[1] = scale;
        }
        jet
    }

    /// Jet of `exp(i(t + u))` in the angle variable `u`.
    pub fn circle_point(t: f64, order: usize) -> Self {
        let base = Complex64::from_polar(1.0, t);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = base;
        for j in 0..=order {
            if j > 0 {
                term = term * Complex64::i() / j as f64;
            }
            coeffs.push(term);
        }
        Jet { coeffs }
    }

    /// Jet of `log(w + s*u)` given `log w` directly and the ratio `s / w`.
    ///
    /// This keeps full relative precision when `w` itself under- or
    /// overflows, as long as its logarithm is representable.
    pub fn log_shifted(log_w: Complex64, scale_over_w: Complex64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(log_w);
        let mut power = Complex64::new(1.0, 0.0);
        for j in 1..=order {
            power *= scale_over_w;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(power * (sign / j as f64));
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    /// `j!` times the `j`-th coefficient: the `j`-th derivative in the
    /// scaled variable.
    pub fn derivative(&self, j: usize) -> Complex64 {
        let mut factorial = 1.0;
        for k in 2..=j {
            factorial *= k as f64;
        }
        self.coeff(j) * factorial
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_constant(&self, value: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    pub fn recip(&self) -> Self {
        Jet::constant(Complex64::new(1.0, 0.0), self.order()).div(self)
    }

    pub fn div(&self, other: &Jet) -> Self {
        let order = self.order().min(other.order());
        let b0 = other.coeffs[0];
        let mut out: Vec<Complex64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= out[j] * other.coeffs[k - j];
            }
            out.push(acc / b0);
        }
        Jet { coeffs: out }
    }

    pub fn exp(&self) -> Self {
        let order = self.order();
        let mut out = Vec::with_capacity(order + 1);
        out.push(self.coeffs[0].exp());
        for k in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j] * j as f64;
            }
            out.push(acc / k as f64);
        }
        Jet { coeffs: out }
    }

    /// Principal logarithm of the constant term, continued as a power series.
    pub fn ln(&self) -> Self {
        self.ln_with_constant(self.coeffs[0].ln())
    }

    /// Logarithm with a caller-chosen value for the constant term, used to
    /// select a branch or to supply a logarithm computed more accurately.
    pub fn ln_with_constant(&self, log_a0: Complex64) -> Self {
        let order = self.order();
        let a0 = self.coeffs[0];
        let mut out = Vec::with_capacity(order + 1);
        out.push(log_a0);
        for k in 1..=order {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out[j] * self.coeffs[k - j] * (j as f64 / k as f64);
            }
            out.push(acc / a0);
        }
        Jet { coeffs: out }
    }

    /// `self^alpha` on the principal branch.
    pub fn powf(&self, alpha: f64) -> Self {
        self.ln().scale(Complex64::new(alpha, 0.0)).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = Jet::constant(Complex64::new(1.0, 0.0), self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates the power series `sum a_j x^j` at this jet by Horner's rule.
    pub fn compose_series(&self, series: &[Complex64]) -> Self {
        let mut acc = Jet::constant(Complex64::new(0.0, 0.0), self.order());
        for &a in series.iter().rev() {
            acc = (&acc * self).add_constant(a);
        }
        acc
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        Jet {
            coeffs: (0..=order).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        Jet {
            coeffs: (0..=order).map(|k| self.coeffs[k] - other.coeffs[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_of_variable_matches_taylor_coefficients() {
        let z = Jet::variable(c(0.3, -0.2), c(1.0, 0.0), 6);
        let e = z.exp();
        let base = c(0.3, -0.2).exp();
        let mut fact = 1.0;
        for k in 0..=6 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.coeff(k) - base / fact).norm() < 1e-14);
        }
    }

    #[test]
    fn log_inverts_exp() {
        let z = Jet::from_coeffs(vec![c(0.4, 0.1), c(1.0, 0.5), c(-0.3, 0.2), c(0.7, 0.0)]);
        let back = z.exp().ln();
        for k in 0..4 {
            assert!((back.coeff(k) - z.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn division_and_powers_agree() {
        let z = Jet::variable(c(0.5, 0.5), c(1.0, 0.0), 5);
        let cube = z.powi(3);
        let via_float = z.powf(3.0);
        let inv = z.powi(-2);
        let check = (&cube * &inv).sub(&z);
        for k in 0..=5 {
            assert!((cube.coeff(k) - via_float.coeff(k)).norm() < 1e-12);
            assert!(check.coeff(k).norm() < 1e-12);
        }
    }

    #[test]
    fn circle_point_differentiates_exponential() {
        let t = 0.7;
        let jet = Jet::circle_point(t, 3);
        let e = Complex64::from_polar(1.0, t);
        assert!((jet.derivative(1) - e * Complex64::i()).norm() < 1e-15);
        assert!((jet.derivative(2) + e).norm() < 1e-15);
    }

    #[test]
    fn shifted_log_matches_direct_log() {
        let w = c(0.2, 0.1);
        let s = c(0.05, 0.0);
        let direct = Jet::variable(w, s, 4).ln();
        let shifted = Jet::log_shifted(w.ln(), s / w, 4);
        for k in 0..=4 {
            assert!((direct.coeff(k) - shifted.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn series_composition_matches_exp() {
        let mut series = Vec::new();
        let mut fact = 1.0;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            series.push(c(1.0 / fact, 0.0));
        }
        let z = Jet::variable(c(0.2, 0.3), c(1.0, 0.0), 4);
        let a = z.compose_series(&series);
        let b = z.exp();
        for k in 0..=4 {
            assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-14);
        }
    }
}
