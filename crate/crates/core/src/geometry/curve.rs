//! Closed parametrized boundary curves with spectral derivatives.

use crate::numerics::{fft, interp::fill_cis};
use crate::{reject, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// A smooth closed curve X(s), s ∈ [0, 2π), counter-clockwise.
pub trait Parametrization: Send + Sync + std::fmt::Debug {
    fn point(&self, s: f64) -> [f64; 2];
}

#[derive(Clone, Copy, Debug)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Parametrization for Circle {
    fn point(&self, s: f64) -> [f64; 2] {
        [self.center[0] + self.radius * s.cos(), self.center[1] + self.radius * s.sin()]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Ellipse {
    pub center: [f64; 2],
    pub a: f64,
    pub b: f64,
}

impl Parametrization for Ellipse {
    fn point(&self, s: f64) -> [f64; 2] {
        [self.center[0] + self.a * s.cos(), self.center[1] + self.b * s.sin()]
    }
}

/// Star: radius r(1 + a cos(d s)) in polar form about the origin.
#[derive(Clone, Copy, Debug)]
pub struct Star {
    pub radius: f64,
    pub amplitude: f64,
    pub lobes: u32,
}

impl Default for Star {
    fn default() -> Self {
        Star { radius: 1.0, amplitude: 0.15, lobes: 5 }
    }
}

impl Parametrization for Star {
    fn point(&self, s: f64) -> [f64; 2] {
        let w = self.radius * (1.0 + self.amplitude * (self.lobes as f64 * s).cos());
        [w * s.cos(), w * s.sin()]
    }
}

/// Kite: (cos s + k cos 2s − k, e sin s) scaled.
#[derive(Clone, Copy, Debug)]
pub struct Kite {
    pub scale: f64,
    pub k: f64,
    pub elongation: f64,
}

impl Default for Kite {
    fn default() -> Self {
        Kite { scale: 1.0, k: 0.65, elongation: 1.5 }
    }
}

impl Parametrization for Kite {
    fn point(&self, s: f64) -> [f64; 2] {
        [
            self.scale * (s.cos() + self.k * (2.0 * s).cos() - self.k),
            self.scale * self.elongation * s.sin(),
        ]
    }
}

/// Position and first two s-derivatives at an arbitrary parameter value.
#[derive(Clone, Copy, Debug)]
pub struct CurveFrame {
    pub x: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

impl CurveFrame {
    pub fn speed(&self) -> f64 {
        self.d1[0].hypot(self.d1[1])
    }

    pub fn normal(&self) -> [f64; 2] {
        let p = self.speed();
        [self.d1[1] / p, -self.d1[0] / p]
    }

    pub fn curvature(&self) -> f64 {
        (self.d1[0] * self.d2[1] - self.d1[1] * self.d2[0]) / self.speed().powi(3)
    }
}

/// Discrete closed curve at N equispaced parameter nodes s_j = 2πj/N.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    pub points: Vec<[f64; 2]>,
    pub speed: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
    pub curvature: Vec<f64>,
    /// Derivative dX/ds at the nodes.
    pub tangent: Vec<[f64; 2]>,
    coeffs_x: Vec<C64>,
    coeffs_y: Vec<C64>,
    /// Largest wavenumber with a non-negligible coefficient.
    kmax: usize,
}

impl BoundaryCurve {
    pub fn from_parametrization(p: &dyn Parametrization, n: usize) -> Result<Self> {
        let a = p.point(0.0);
        let b = p.point(2.0 * PI);
        let xs: Vec<f64> = (0..n).map(|j| p.point(2.0 * PI * j as f64 / n as f64)[0]).collect();
        let ys: Vec<f64> = (0..n).map(|j| p.point(2.0 * PI * j as f64 / n as f64)[1]).collect();
        let diam = bbox_diagonal(&xs, &ys);
        if (a[0] - b[0]).hypot(a[1] - b[1]) > 1e-8 * diam {
            return reject("curve is not closed: X(0) and X(2π) differ");
        }
        Self::from_samples(&xs, &ys)
    }

    pub fn from_samples(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 16 || n % 2 != 0 || ys.len() != n {
            return reject(format!("boundary needs an even node count ≥ 16, got {n}"));
        }
        Self::from_coeffs(fft::forward(xs), fft::forward(ys), xs, ys)
    }

    fn from_coeffs(cx: Vec<C64>, cy: Vec<C64>, xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        let deriv = |c: &[C64], order: u32| {
            let mut d = c.to_vec();
            fft::apply_derivative(&mut d, order, 2.0 * PI);
            fft::inverse_real(&d)
        };
        let (xs1, ys1, xs2, ys2) = (deriv(&cx, 1), deriv(&cy, 1), deriv(&cx, 2), deriv(&cy, 2));
        let speed: Vec<f64> = (0..n).map(|j| xs1[j].hypot(ys1[j])).collect();
        let smax = speed.iter().cloned().fold(0.0, f64::max);
        if speed.iter().any(|&p| !(p > 1e-12 * smax)) {
            return reject("zero speed in boundary parametrization");
        }
        let normals = (0..n).map(|j| [ys1[j] / speed[j], -xs1[j] / speed[j]]).collect();
        let curvature = (0..n)
            .map(|j| (xs1[j] * ys2[j] - ys1[j] * xs2[j]) / speed[j].powi(3))
            .collect();
        let cmax = cx.iter().chain(&cy).map(|c| c.norm()).fold(0.0, f64::max);
        let kmax = (0..=n / 2)
            .rev()
            .find(|&k| {
                let pair = [cx[k], cy[k], cx[(n - k) % n], cy[(n - k) % n]];
                pair.iter().any(|c| c.norm() > 1e-16 * cmax)
            })
            .unwrap_or(0);
        let curve = Self {
            points: xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(),
            speed,
            normals,
            curvature,
            tangent: xs1.iter().zip(&ys1).map(|(&x, &y)| [x, y]).collect(),
            coeffs_x: cx,
            coeffs_y: cy,
            kmax,
        };
        if curve.signed_area() <= 0.0 {
            return reject("boundary must be counter-clockwise");
        }
        Ok(curve)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ds(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn s(&self, j: usize) -> f64 {
        self.ds() * j as f64
    }

    /// Smallest and largest node spacing φ_j Δs.
    pub fn h_min(&self) -> f64 {
        self.speed.iter().cloned().fold(f64::INFINITY, f64::min) * self.ds()
    }

    pub fn h_max(&self) -> f64 {
        self.speed.iter().cloned().fold(0.0, f64::max) * self.ds()
    }

    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    /// Bounding-box diagonal, used as the length scale for tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        let mut a = 0.0;
        for j in 0..n {
            let p = self.points[j];
            let t = self.tangent[j];
            a += p[0] * t[1] - p[1] * t[0];
        }
        0.5 * a * self.ds()
    }

    /// X(s), X'(s), X''(s) from the truncated Fourier series.
    pub fn frame(&self, s: f64) -> CurveFrame {
        let n = self.len();
        let km = self.kmax;
        let mut cs = vec![0.0; km + 1];
        let mut sn = vec![0.0; km + 1];
        fill_cis(s, &mut cs, &mut sn);
        let mut out = CurveFrame { x: [0.0; 2], d1: [0.0; 2], d2: [0.0; 2] };
        for (d, c) in [&self.coeffs_x, &self.coeffs_y].into_iter().enumerate() {
            let mut v = c[0].re;
            let mut v1 = 0.0;
            let mut v2 = 0.0;
            for k in 1..=km {
                let kf = k as f64;
                let e = C64::new(cs[k], sn[k]);
                let nyquist = n % 2 == 0 && k == n / 2;
                // Pair c_k e^{iks} + c_{-k} e^{-iks}; the Nyquist term is a cosine.
                let (term, dterm) = if nyquist {
                    let a = c[k].re;
                    (a * cs[k], 0.0)
                } else {
                    let z = c[k] * e + c[n - k] * e.conj();
                    let dz = C64::new(0.0, kf) * (c[k] * e - c[n - k] * e.conj());
                    (z.re, dz.re)
                };
                v += term;
                v1 += dterm;
                v2 -= kf * kf * term;
            }
            out.x[d] = v;
            out.d1[d] = v1;
            out.d2[d] = v2;
        }
        out
    }

    pub fn point_at(&self, s: f64) -> [f64; 2] {
        self.frame(s).x
    }

    /// Curve X + r n at the same nodes.
    pub fn offset(&self, r: f64) -> Result<BoundaryCurve> {
        let xs: Vec<f64> = self.points.iter().zip(&self.normals).map(|(p, nn)| p[0] + r * nn[0]).collect();
        let ys: Vec<f64> = self.points.iter().zip(&self.normals).map(|(p, nn)| p[1] + r * nn[1]).collect();
        BoundaryCurve::from_samples(&xs, &ys)
    }

    /// Band-limited resampling to m nodes.
    pub fn resample(&self, m: usize) -> Result<BoundaryCurve> {
        if m < 16 || m % 2 != 0 {
            return reject(format!("boundary needs an even node count ≥ 16, got {m}"));
        }
        // Reuse the coefficients so that derivatives see no fresh rounding noise.
        let cx = fft::resample_coeffs(&self.coeffs_x, m);
        let cy = fft::resample_coeffs(&self.coeffs_y, m);
        let xs = fft::inverse_real(&cx);
        let ys = fft::inverse_real(&cy);
        BoundaryCurve::from_coeffs(cx, cy, &xs, &ys)
    }

    /// Resample a nodal density on this curve to m points.
    pub fn resample_density(&self, v: &[f64], m: usize) -> Vec<f64> {
        fft::resample(v, m)
    }
}

fn bbox_diagonal(xs: &[f64], ys: &[f64]) -> f64 {
    let span = |v: &[f64]| {
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    span(xs).hypot(span(ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle() {
        let c = BoundaryCurve::from_parametrization(&Circle { center: [0.0, 0.0], radius: 1.0 }, 64).unwrap();
        for j in 0..64 {
            let s = c.s(j);
            assert!((c.speed[j] - 1.0).abs() < 1e-13);
            assert!((c.curvature[j] - 1.0).abs() < 1e-12);
            assert!((c.normals[j][0] - s.cos()).abs() < 1e-13 && (c.normals[j][1] - s.sin()).abs() < 1e-13);
        }
        assert!((c.signed_area() - PI).abs() < 1e-12);
    }

    #[test]
    fn ellipse_curvature() {
        let c = BoundaryCurve::from_parametrization(&Ellipse { center: [0.0, 0.0], a: 2.0, b: 1.0 }, 128).unwrap();
        assert!((c.curvature[0] - 2.0).abs() < 1e-11);
        assert!((c.curvature[32] - 0.25).abs() < 1e-11);
    }

    #[test]
    fn star_curvature_matches_finite_difference_oracle() {
        // κ(0) from a 5-point finite difference at 50 digits.
        const KAPPA0: f64 = 3.705_103_969_754_253_3;
        let c = BoundaryCurve::from_parametrization(&Star::default(), 256).unwrap();
        assert!((c.curvature[0] - KAPPA0).abs() < 1e-10);
    }

    #[test]
    fn normal_identity_and_closure() {
        let c = BoundaryCurve::from_parametrization(&Kite::default(), 128).unwrap();
        for j in 0..c.len() {
            let t = c.tangent[j];
            let pn = [c.speed[j] * c.normals[j][0], c.speed[j] * c.normals[j][1]];
            assert!((pn[0] - t[1]).abs() <= 1e-12 * c.speed[j]);
            assert!((pn[1] + t[0]).abs() <= 1e-12 * c.speed[j]);
        }
        let a = c.point_at(0.0);
        let b = c.point_at(2.0 * PI);
        assert!((a[0] - b[0]).hypot(a[1] - b[1]) < 1e-13);
    }

    #[test]
    fn off_node_frame_matches_analytic() {
        let st = Star::default();
        let c = BoundaryCurve::from_parametrization(&st, 64).unwrap();
        for &s in &[0.1, 1.234, 5.9] {
            let f = c.frame(s);
            let p = st.point(s);
            assert!((f.x[0] - p[0]).abs() < 1e-14 && (f.x[1] - p[1]).abs() < 1e-14);
        }
        let f = c.frame(c.s(7));
        assert!((f.curvature() - c.curvature[7]).abs() < 1e-12);
    }

    #[test]
    fn rejections() {
        #[derive(Debug)]
        struct Open;
        impl Parametrization for Open {
            fn point(&self, s: f64) -> [f64; 2] {
                [s.cos(), s.sin() + 0.1 * s]
            }
        }
        assert!(BoundaryCurve::from_parametrization(&Open, 64).is_err());
        #[derive(Debug)]
        struct Clockwise;
        impl Parametrization for Clockwise {
            fn point(&self, s: f64) -> [f64; 2] {
                [s.cos(), -s.sin()]
            }
        }
        assert!(BoundaryCurve::from_parametrization(&Clockwise, 64).is_err());
        assert!(BoundaryCurve::from_parametrization(&Star::default(), 15).is_err());
        #[derive(Debug)]
        struct Stall;
        impl Parametrization for Stall {
            fn point(&self, s: f64) -> [f64; 2] {
                // cusp at s = 0: X' vanishes there
                let t = s - s.sin();
                [t.cos(), t.sin()]
            }
        }
        assert!(BoundaryCurve::from_parametrization(&Stall, 64).is_err());
    }

    #[test]
    fn ellipse_curvature_converges_spectrally() {
        let el = Ellipse { center: [0.0, 0.0], a: 1.0, b: 0.4 };
        let exact = |s: f64| el.a * el.b / (el.a.powi(2) * s.sin().powi(2) + el.b.powi(2) * s.cos().powi(2)).powf(1.5);
        let mut prev = f64::INFINITY;
        for n in [16, 32, 64, 128] {
            let c = BoundaryCurve::from_parametrization(&el, n).unwrap();
            let err = (0..n).map(|j| (c.curvature[j] - exact(c.s(j))).abs()).fold(0.0, f64::max);
            assert!(err * 4.0 <= prev || err < 1e-10, "n={n}: {err} vs {prev}");
            prev = err;
        }
    }
}
