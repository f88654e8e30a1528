//! Periodic transforms. Forward transforms carry the 1/n factor, so a
//! coefficient array holds the amplitudes of the trigonometric interpolant.

use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

/// Integer wavenumbers in FFT order; the Nyquist index maps to -n/2.
pub fn wavenumbers(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 })
        .collect()
}

pub fn forward(x: &[f64]) -> Vec<C64> {
    let n = x.len();
    let mut buf: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    plan(n, true).process(&mut buf);
    let s = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= s);
    buf
}

pub fn forward_complex(mut buf: Vec<C64>) -> Vec<C64> {
    let n = buf.len();
    plan(n, true).process(&mut buf);
    let s = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= s);
    buf
}

pub fn inverse_complex(mut buf: Vec<C64>) -> Vec<C64> {
    let n = buf.len();
    plan(n, false).process(&mut buf);
    buf
}

/// Inverse of [`forward`], keeping the real part.
pub fn inverse_real(c: &[C64]) -> Vec<f64> {
    inverse_complex(c.to_vec()).iter().map(|z| z.re).collect()
}

/// Spectral derivative of a periodic sample vector on [0, period).
/// The Nyquist mode is dropped for odd orders and kept for even orders.
pub fn derivative(values: &[f64], order: u32, period: f64) -> Vec<f64> {
    let mut c = forward(values);
    apply_derivative(&mut c, order, period);
    inverse_real(&c)
}

pub(crate) fn apply_derivative(c: &mut [C64], order: u32, period: f64) {
    let n = c.len();
    let scale = 2.0 * std::f64::consts::PI / period;
    for (i, k) in wavenumbers(n).into_iter().enumerate() {
        if order % 2 == 1 && n % 2 == 0 && i == n / 2 {
            c[i] = C64::new(0.0, 0.0);
            continue;
        }
        let ik = C64::new(0.0, k * scale);
        c[i] *= ik.powu(order);
    }
}

/// Matrix (m × n) of band-limited interpolation from n to m equispaced points.
pub fn interpolation_matrix(n: usize, m: usize) -> Array2<f64> {
    let mut e = Array2::zeros((m, n));
    let mut unit = vec![0.0; n];
    for j in 0..n {
        unit[j] = 1.0;
        for (i, v) in resample(&unit, m).into_iter().enumerate() {
            e[[i, j]] = v;
        }
        unit[j] = 0.0;
    }
    e
}

/// Band-limited resampling of periodic data from n to m points.
/// A Nyquist coefficient is split evenly when upsampling.
pub fn resample(values: &[f64], m: usize) -> Vec<f64> {
    let n = values.len();
    if m == n {
        return values.to_vec();
    }
    let c = forward(values);
    let out = resample_coeffs(&c, m);
    inverse_real(&out)
}

pub fn resample_coeffs(c: &[C64], m: usize) -> Vec<C64> {
    let n = c.len();
    let mut out = vec![C64::new(0.0, 0.0); m];
    let kmax = n.min(m) / 2;
    for k in 0..kmax {
        out[k] = c[k];
        if k > 0 {
            out[m - k] = c[n - k];
        }
    }
    // Nyquist handling of the shorter length.
    if n.min(m) % 2 == 0 {
        let kn = kmax;
        if m > n {
            let v = c[n - kn];
            out[kn] = v * 0.5;
            out[m - kn] = v * 0.5;
        } else {
            out[m - kn] = c[kn] + c[n - kn];
        }
    } else {
        out[kmax] = c[kmax];
        out[m - kmax] = c[n - kmax];
    }
    out
}

/// Evaluate the trigonometric interpolant of coefficients `c` (from
/// [`forward`], period 2π) at `s`. Nyquist term treated as a cosine.
pub fn eval_coeffs(c: &[C64], s: f64) -> f64 {
    let n = c.len();
    let mut acc = c[0].re;
    for k in 1..n.div_ceil(2) {
        let e = C64::from_polar(1.0, k as f64 * s);
        acc += 2.0 * (c[k] * e).re;
    }
    if n % 2 == 0 {
        acc += c[n / 2].re * (0.5 * n as f64 * s).cos();
    }
    acc
}

/// 2D forward transform of an array indexed [iy, ix].
pub fn fft2(a: &Array2<f64>) -> Array2<C64> {
    let mut out = a.mapv(|v| C64::new(v, 0.0));
    transform_axis(&mut out, Axis(1), true);
    transform_axis(&mut out, Axis(0), true);
    let s = 1.0 / a.len() as f64;
    out.mapv_inplace(|c| c * s);
    out
}

pub fn ifft2_real(c: &Array2<C64>) -> Array2<f64> {
    let mut out = c.clone();
    transform_axis(&mut out, Axis(0), false);
    transform_axis(&mut out, Axis(1), false);
    out.mapv(|z| z.re)
}

fn transform_axis(a: &mut Array2<C64>, axis: Axis, forward: bool) {
    let n = a.len_of(axis);
    let p = plan(n, forward);
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for mut lane in a.lanes_mut(axis) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        p.process(&mut buf);
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_of_sines() {
        let s = grid(32);
        for k in 1..15 {
            let v: Vec<f64> = s.iter().map(|&t| (k as f64 * t).sin()).collect();
            let d = derivative(&v, 1, 2.0 * PI);
            for (t, dv) in s.iter().zip(&d) {
                assert!((dv - k as f64 * (k as f64 * t).cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nyquist_second_derivative_is_kept() {
        let s = grid(16);
        let v: Vec<f64> = s.iter().map(|&t| (8.0 * t).cos()).collect();
        let d2 = derivative(&v, 2, 2.0 * PI);
        for (a, b) in d2.iter().zip(&v) {
            assert!((a + 64.0 * b).abs() < 1e-11);
        }
        let d1 = derivative(&v, 1, 2.0 * PI);
        assert!(d1.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn resample_roundtrip_and_exactness() {
        let s = grid(20);
        let f = |t: f64| (3.0 * t).cos() + 0.3 * (7.0 * t).sin() + 0.1 * (10.0 * t).cos();
        let v: Vec<f64> = s.iter().map(|&t| f(t)).collect();
        let up = resample(&v, 64);
        for (j, u) in up.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / 64.0;
            assert!((u - f(t)).abs() < 1e-13, "{j}");
        }
        let back = resample(&up, 20);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn parseval() {
        let v: Vec<f64> = (0..50).map(|j| ((j * 7919) % 13) as f64 - 6.0).collect();
        let c = forward(&v);
        let lhs: f64 = v.iter().map(|x| x * x).sum::<f64>() / 50.0;
        let rhs: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-13 * lhs);
    }

    #[test]
    fn eval_coeffs_matches_nodes() {
        let v: Vec<f64> = (0..12).map(|j| (j as f64).sin()).collect();
        let c = forward(&v);
        for (j, x) in v.iter().enumerate() {
            let s = 2.0 * PI * j as f64 / 12.0;
            assert!((eval_coeffs(&c, s) - x).abs() < 1e-13);
        }
    }

    #[test]
    fn fft2_roundtrip() {
        let a = Array2::from_shape_fn((6, 8), |(i, j)| (i * 3 + j * j) as f64);
        let back = ifft2_real(&fft2(&a));
        for (x, y) in a.iter().zip(back.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
