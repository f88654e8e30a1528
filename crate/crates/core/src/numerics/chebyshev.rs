//! Chebyshev series on [-1, 1] with first-kind (Gauss) nodes.

use std::f64::consts::PI;

/// x_k = cos(π(2k+1)/(2m)), k = 0..m, in decreasing order.
pub fn nodes(m: usize) -> Vec<f64> {
    (0..m)
        .map(|k| (PI * (2 * k + 1) as f64 / (2 * m) as f64).cos())
        .collect()
}

/// Coefficients of the degree m-1 interpolant through values at [`nodes`].
pub fn values_to_coeffs(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let mut c = vec![0.0; m];
    for (n, cn) in c.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, vk) in v.iter().enumerate() {
            acc += vk * (PI * (n * (2 * k + 1)) as f64 / (2 * m) as f64).cos();
        }
        *cn = acc * if n == 0 { 1.0 } else { 2.0 } / m as f64;
    }
    c
}

pub fn coeffs_to_values(c: &[f64], m: usize) -> Vec<f64> {
    nodes(m).iter().map(|&x| eval(c, x)).collect()
}

/// Clenshaw evaluation of Σ c_n T_n(x).
pub fn eval(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &cn in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + cn;
        b2 = b1;
        b1 = b0;
    }
    match c.first() {
        Some(&c0) => x * b1 - b2 + c0,
        None => 0.0,
    }
}

/// T_0(x)..T_{n-1}(x).
pub fn basis(x: f64, n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n];
    fill_basis(x, &mut t);
    t
}

pub fn fill_basis(x: f64, t: &mut [f64]) {
    let n = t.len();
    if n > 0 {
        t[0] = 1.0;
    }
    if n > 1 {
        t[1] = x;
    }
    for k in 2..n {
        t[k] = 2.0 * x * t[k - 1] - t[k - 2];
    }
}

/// Coefficients of d/dx of the series.
pub fn derivative_coeffs(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0; n.max(1)];
    }
    let mut d = vec![0.0; n];
    for k in (0..n - 1).rev() {
        let next = if k + 2 < n { d[k + 2] } else { 0.0 };
        d[k] = next + 2.0 * (k + 1) as f64 * c[k + 1];
    }
    d[0] *= 0.5;
    d
}

/// Coefficients of the antiderivative vanishing at x = -1.
pub fn antiderivative_coeffs(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut a = vec![0.0; n + 1];
    let get = |k: usize| if k < n { c[k] } else { 0.0 };
    for k in 1..=n {
        let cm = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
        a[k] = (cm - get(k + 1)) / (2 * k) as f64;
    }
    a[0] = -eval(&a, -1.0);
    a
}

/// Interpolating fit of `f` at n first-kind nodes.
pub fn fit(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let v: Vec<f64> = nodes(n).into_iter().map(f).collect();
    values_to_coeffs(&v)
}

/// Matrix (rows = points, cols = n basis functions) of the d-th derivative
/// of T_0..T_{n-1} at the given points.
pub fn derivative_matrix(points: &[f64], n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut cols = Vec::with_capacity(n);
    for m in 0..n {
        let mut e = vec![0.0; n];
        e[m] = 1.0;
        for _ in 0..d {
            e = derivative_coeffs(&e);
        }
        cols.push(e);
    }
    points
        .iter()
        .map(|&x| cols.iter().map(|c| eval(c, x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_for_polynomials() {
        let f = |x: f64| 3.0 * x.powi(5) - x.powi(2) + 0.5;
        let c = fit(f, 8);
        for x in [-1.0, -0.3, 0.0, 0.77, 1.0] {
            assert!((eval(&c, x) - f(x)).abs() < 1e-14);
        }
        assert!(c[6].abs() < 1e-15 && c[7].abs() < 1e-15);
    }

    #[test]
    fn derivative_and_antiderivative() {
        let c = fit(|x| (2.0 * x).sin(), 30);
        let d = derivative_coeffs(&c);
        let a = antiderivative_coeffs(&c);
        for x in [-0.9, -0.1, 0.4, 0.95] {
            assert!((eval(&d, x) - 2.0 * (2.0 * x).cos()).abs() < 1e-12);
            let exact = (-(2.0 * x).cos() + (2.0f64 * -1.0).cos()) / 2.0;
            assert!((eval(&a, x) - exact).abs() < 1e-14);
        }
        assert!(eval(&a, -1.0).abs() < 1e-15);
    }

    #[test]
    fn roundtrip() {
        let v: Vec<f64> = (0..11).map(|k| (k as f64 * 1.3).cos()).collect();
        let back = coeffs_to_values(&values_to_coeffs(&v), 11);
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn second_derivative_matrix() {
        let pts = nodes(6);
        let d2 = derivative_matrix(&pts, 6, 2);
        // T_3'' = 24x
        for (row, x) in d2.iter().zip(&pts) {
            assert!((row[3] - 24.0 * x).abs() < 1e-12);
        }
    }
}
