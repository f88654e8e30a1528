//! Sampled fields with lazily cached spectral coefficients.

use super::{chebyshev, fft};
use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Uniform periodic grid geometry. Arrays on it are indexed [iy, ix] with
/// node (ix, iy) at (x0 + ix·h, y0 + iy·h).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn lx(&self) -> f64 {
        self.h * self.nx as f64
    }

    pub fn ly(&self) -> f64 {
        self.h * self.ny as f64
    }

    pub fn node(&self, ix: usize, iy: usize) -> [f64; 2] {
        [self.x0 + ix as f64 * self.h, self.y0 + iy as f64 * self.h]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let tol = 1e-12 * (self.lx() + self.ly());
        p[0] >= self.x0 - tol
            && p[0] <= self.x0 + self.lx() + tol
            && p[1] >= self.y0 - tol
            && p[1] <= self.y0 + self.ly() + tol
    }

    /// Physical wavenumbers (rad/length) along x and y in FFT order.
    pub fn wavevectors(&self) -> (Vec<f64>, Vec<f64>) {
        let kx = fft::wavenumbers(self.nx).into_iter().map(|k| 2.0 * PI * k / self.lx()).collect();
        let ky = fft::wavenumbers(self.ny).into_iter().map(|k| 2.0 * PI * k / self.ly()).collect();
        (kx, ky)
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Array2<f64> {
        Array2::from_shape_fn((self.ny, self.nx), |(iy, ix)| {
            let [x, y] = self.node(ix, iy);
            f(x, y)
        })
    }
}

/// Real values on a [`GridSpec`] with cached 2D Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SpectralField2D {
    pub grid: GridSpec,
    values: Array2<f64>,
    coeffs: OnceLock<Array2<C64>>,
}

impl SpectralField2D {
    pub fn new(grid: GridSpec, values: Array2<f64>) -> Self {
        assert_eq!(values.dim(), (grid.ny, grid.nx));
        Self { grid, values, coeffs: OnceLock::new() }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Array2<C64>) -> Self {
        let values = fft::ifft2_real(&coeffs);
        let cell = OnceLock::new();
        let _ = cell.set(coeffs);
        Self { grid, values, coeffs: cell }
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn coeffs(&self) -> &Array2<C64> {
        self.coeffs.get_or_init(|| fft::fft2(&self.values))
    }

    /// Multiply coefficients by a symbol of the physical wavevector.
    pub fn apply_symbol(&self, symbol: impl Fn(f64, f64) -> C64) -> SpectralField2D {
        let (kx, ky) = self.grid.wavevectors();
        let mut c = self.coeffs().clone();
        for ((iy, ix), v) in c.indexed_iter_mut() {
            *v *= symbol(kx[ix], ky[iy]);
        }
        SpectralField2D::from_coeffs(self.grid, c)
    }

    /// Spectral ∂x (axis 0) or ∂y (axis 1); Nyquist modes dropped.
    pub fn derivative(&self, axis: usize) -> SpectralField2D {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (kx, ky) = self.grid.wavevectors();
        let mut c = self.coeffs().clone();
        for ((iy, ix), v) in c.indexed_iter_mut() {
            let (k, nyq) = if axis == 0 {
                (kx[ix], nx % 2 == 0 && ix == nx / 2)
            } else {
                (ky[iy], ny % 2 == 0 && iy == ny / 2)
            };
            *v = if nyq { C64::new(0.0, 0.0) } else { *v * C64::new(0.0, k) };
        }
        SpectralField2D::from_coeffs(self.grid, c)
    }

    pub fn sum(&self) -> f64 {
        self.values.sum()
    }
}

/// Field on an annular tensor grid: nodal in s (n points on [0, 2π)),
/// Chebyshev in r. `r_outer` is the signed r of the edge mapped to x = +1
/// (the interface); x = -1 is the boundary r = 0.
#[derive(Clone, Debug)]
pub struct AnnularField {
    coeffs: Array2<f64>,
    values: Array2<f64>,
    r_outer: f64,
    fourier: OnceLock<(Array2<f64>, Array2<f64>)>,
}

/// Which edge of the annulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    Boundary,
    Interface,
}

impl AnnularField {
    /// From values at the n × m tensor nodes (first-kind Chebyshev in r).
    pub fn from_values(values: Array2<f64>, r_outer: f64) -> Self {
        let mut coeffs = Array2::zeros(values.dim());
        for (mut c, v) in coeffs.axis_iter_mut(Axis(0)).zip(values.axis_iter(Axis(0))) {
            let cv = chebyshev::values_to_coeffs(&v.to_vec());
            c.assign(&ndarray::Array1::from(cv));
        }
        Self { coeffs, values, r_outer, fourier: OnceLock::new() }
    }

    /// From n × k Chebyshev coefficients; values are taken at m nodes.
    pub fn from_coeffs(coeffs: Array2<f64>, m: usize, r_outer: f64) -> Self {
        let x = chebyshev::nodes(m);
        let n = coeffs.nrows();
        let mut values = Array2::zeros((n, m));
        for j in 0..n {
            let row = coeffs.row(j).to_vec();
            for (k, &xk) in x.iter().enumerate() {
                values[[j, k]] = chebyshev::eval(&row, xk);
            }
        }
        Self { coeffs, values, r_outer, fourier: OnceLock::new() }
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn coeffs(&self) -> &Array2<f64> {
        &self.coeffs
    }

    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }

    pub fn n_s(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn n_r(&self) -> usize {
        self.values.ncols()
    }

    pub fn to_x(&self, r: f64) -> f64 {
        2.0 * r / self.r_outer - 1.0
    }

    /// Per-column Chebyshev evaluation at one edge.
    pub fn edge_values(&self, edge: Edge) -> Vec<f64> {
        let x = match edge {
            Edge::Boundary => -1.0,
            Edge::Interface => 1.0,
        };
        self.coeffs
            .axis_iter(Axis(0))
            .map(|c| chebyshev::eval(&c.to_vec(), x))
            .collect()
    }

    /// ∂/∂r as a new field on the same nodes.
    pub fn r_derivative(&self) -> AnnularField {
        let scale = 2.0 / self.r_outer;
        let mut d = Array2::zeros(self.coeffs.dim());
        for (mut out, c) in d.axis_iter_mut(Axis(0)).zip(self.coeffs.axis_iter(Axis(0))) {
            let dc = chebyshev::derivative_coeffs(&c.to_vec());
            for (o, v) in out.iter_mut().zip(dc) {
                *o = v * scale;
            }
        }
        AnnularField::from_coeffs(d, self.n_r(), self.r_outer)
    }

    /// Fourier coefficients along s of every Chebyshev coefficient column,
    /// half spectrum (n/2 + 1 modes), as (real, imag) arrays of shape (k, modes).
    pub(crate) fn fourier(&self) -> &(Array2<f64>, Array2<f64>) {
        self.fourier.get_or_init(|| {
            let (n, k) = self.coeffs.dim();
            let nm = n / 2 + 1;
            let mut re = Array2::zeros((k, nm));
            let mut im = Array2::zeros((k, nm));
            for m in 0..k {
                let c = fft::forward(&self.coeffs.column(m).to_vec());
                for q in 0..nm {
                    let w = if q == 0 || (n % 2 == 0 && q == n / 2) { 1.0 } else { 2.0 };
                    re[[m, q]] = w * c[q].re;
                    im[[m, q]] = w * c[q].im;
                }
            }
            (re, im)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GridSpec {
        GridSpec { x0: -1.0, y0: 0.5, h: 0.1, nx: 20, ny: 16 }
    }

    #[test]
    fn coefficient_roundtrip() {
        let g = spec();
        let v = g.sample(|x, y| (x * 3.0).sin() * y.exp());
        let f = SpectralField2D::new(g, v.clone());
        let back = SpectralField2D::from_coeffs(g, f.coeffs().clone());
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (a, b) in v.iter().zip(back.values().iter()) {
            assert!((a - b).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn parseval_2d() {
        let g = spec();
        let f = SpectralField2D::new(g, g.sample(|x, y| x * x - y + 0.3 * x * y));
        let lhs = f.values().iter().map(|v| v * v).sum::<f64>() / (g.nx * g.ny) as f64;
        let rhs: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-13 * lhs);
    }

    #[test]
    fn derivative_of_resolved_mode() {
        let g = spec();
        let (lx, ly) = (g.lx(), g.ly());
        let f = SpectralField2D::new(
            g,
            g.sample(|x, y| (2.0 * PI * 3.0 * (x - g.x0) / lx).sin() * (2.0 * PI * (y - g.y0) / ly).cos()),
        );
        let dx = f.derivative(0);
        let dy = f.derivative(1);
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let [x, y] = g.node(ix, iy);
                let (a, b) = (2.0 * PI * 3.0 * (x - g.x0) / lx, 2.0 * PI * (y - g.y0) / ly);
                let ex = 2.0 * PI * 3.0 / lx * a.cos() * b.cos();
                let ey = -2.0 * PI / ly * a.sin() * b.sin();
                assert!((dx.values()[[iy, ix]] - ex).abs() < 1e-12);
                assert!((dy.values()[[iy, ix]] - ey).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn annular_roundtrip_and_edges() {
        let (n, m) = (8, 6);
        let xs = chebyshev::nodes(m);
        let vals = Array2::from_shape_fn((n, m), |(j, k)| {
            let s = 2.0 * PI * j as f64 / n as f64;
            (1.0 + s.cos()) * (xs[k] * xs[k] - 0.5 * xs[k])
        });
        let f = AnnularField::from_values(vals.clone(), -0.3);
        let g = AnnularField::from_coeffs(f.coeffs().clone(), m, -0.3);
        for (a, b) in vals.iter().zip(g.values().iter()) {
            assert!((a - b).abs() < 1e-13);
        }
        let gam = f.edge_values(Edge::Boundary);
        let int = f.edge_values(Edge::Interface);
        for j in 0..n {
            let s = 2.0 * PI * j as f64 / n as f64;
            assert!((gam[j] - (1.0 + s.cos()) * 1.5).abs() < 1e-13);
            assert!((int[j] - (1.0 + s.cos()) * 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn annular_constant_and_linear_edges() {
        let (n, m) = (6, 5);
        let c = AnnularField::from_values(Array2::from_elem((n, m), 2.5), -0.2);
        assert!(c.edge_values(Edge::Boundary).iter().all(|v| (v - 2.5).abs() < 1e-14));
        assert!(c.edge_values(Edge::Interface).iter().all(|v| (v - 2.5).abs() < 1e-14));
        // 0 at r = 0, 1 at r = -0.2
        let xs = chebyshev::nodes(m);
        let lin = AnnularField::from_values(Array2::from_shape_fn((n, m), |(_, k)| (xs[k] + 1.0) / 2.0), -0.2);
        assert!(lin.edge_values(Edge::Boundary).iter().all(|v| v.abs() < 1e-14));
        assert!(lin.edge_values(Edge::Interface).iter().all(|v| (v - 1.0).abs() < 1e-14));
        // d/dr of (x+1)/2 = r/r_outer is 1/r_outer
        let d = lin.r_derivative();
        assert!(d.values().iter().all(|v| (v + 5.0).abs() < 1e-12));
    }
}
