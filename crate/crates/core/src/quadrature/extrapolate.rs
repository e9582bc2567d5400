//! Extrapolation helpers: Richardson tables, polynomial extrapolation to
//! zero and small linear least-squares fits.

/// Solves the least-squares problem `min |A c - y|` for a small dense
/// design matrix given by rows. Uses modified Gram-Schmidt QR with column
/// scaling. Returns `None` when the columns are numerically dependent.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let m = rows.len();
    let n = rows.first()?.len();
    if m < n || y.len() != m {
        return None;
    }
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let scales: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    for (c, s) in cols.iter_mut().zip(&scales) {
        if *s == 0.0 {
            return None;
        }
        c.iter_mut().for_each(|x| *x /= s);
    }
    let mut r = vec![vec![0.0; n]; n];
    let mut rhs = y.to_vec();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = cols[j].clone();
        for (i, qi) in q.iter().enumerate() {
            let proj: f64 = qi.iter().zip(&v).map(|(a, b)| a * b).sum();
            r[i][j] = proj;
            v.iter_mut().zip(qi).for_each(|(x, qx)| *x -= proj * qx);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return None;
        }
        r[j][j] = norm;
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }
    let mut qty = vec![0.0; n];
    for (j, qj) in q.iter().enumerate() {
        let proj: f64 = qj.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        qty[j] = proj;
        rhs.iter_mut().zip(qj).for_each(|(x, qx)| *x -= proj * qx);
    }
    let mut c = vec![0.0; n];
    for j in (0..n).rev() {
        let mut acc = qty[j];
        for k in j + 1..n {
            acc -= r[j][k] * c[k];
        }
        c[j] = acc / r[j][j];
    }
    Some(c.iter().zip(&scales).map(|(x, s)| x / s).collect())
}

/// Fits `values[i] ~ c_0 + sum_k c_k h_i^{exponents[k]}` and returns the
/// coefficients, `c_0` first.
pub fn fit_power_model(hs: &[f64], values: &[f64], exponents: &[f64]) -> Option<Vec<f64>> {
    let rows: Vec<Vec<f64>> = hs
        .iter()
        .map(|h| {
            let mut row = vec![1.0];
            row.extend(exponents.iter().map(|e| h.powf(*e)));
            row
        })
        .collect();
    least_squares(&rows, values)
}

/// Richardson step for two values computed at parameters `h` and `h/ratio`
/// when the leading error term is proportional to `h^rate`.
pub fn richardson_pair(coarse: f64, fine: f64, ratio: f64, rate: f64) -> f64 {
    fine + (fine - coarse) / (ratio.powf(rate) - 1.0)
}

/// Value at zero of the interpolating polynomial through `(xs, ys)`.
pub fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Result of repeated Richardson elimination on a geometric sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Richardson table for values computed at `h_0, h_0/r, h_0/r^2, ...`
/// whose error expands in the given powers of `h`. Each column removes
/// one power; the error estimate is the change between the last two
/// diagonal entries.
pub fn richardson_table(values: &[f64], ratio: f64, exponents: &[f64]) -> Extrapolated {
    assert!(!values.is_empty());
    let mut column = values.to_vec();
    let mut diagonal = vec![*values.last().unwrap()];
    for &e in exponents.iter().take(values.len().saturating_sub(1)) {
        let factor = ratio.powf(e);
        column = column
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0))
            .collect();
        diagonal.push(*column.last().unwrap());
    }
    let value = *diagonal.last().unwrap();
    let error = if diagonal.len() >= 2 {
        (diagonal[diagonal.len() - 1] - diagonal[diagonal.len() - 2]).abs()
    } else {
        f64::INFINITY
    };
    Extrapolated { value, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_recovers_exact_model() {
        let hs = [1.0, 0.5, 0.25, 0.125, 0.0625];
        let values: Vec<f64> = hs.iter().map(|h: &f64| 2.0 - 3.0 * h.powf(0.5) + 0.7 * h.powf(1.5)).collect();
        let c = fit_power_model(&hs, &values, &[0.5, 1.5]).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-12);
        assert!((c[1] + 3.0).abs() < 1e-11);
    }

    #[test]
    fn richardson_table_removes_odd_powers() {
        let values: Vec<f64> = (0..6)
            .map(|k| {
                let h = 0.1 / 2f64.powi(k);
                1.5 - 0.4 * h + 2.0 * h.powi(3) - 5.0 * h.powi(5)
            })
            .collect();
        let r = richardson_table(&values, 2.0, &[1.0, 3.0, 5.0, 7.0, 9.0]);
        assert!((r.value - 1.5).abs() < 1e-13, "{r:?}");
    }

    #[test]
    fn neville_extrapolates_polynomials() {
        let xs = [1.0, 0.5, 0.25, 0.125];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 + x - 0.3 * x * x + x * x * x).collect();
        assert!((neville_at_zero(&xs, &ys) - 0.5).abs() < 1e-13);
    }
}
