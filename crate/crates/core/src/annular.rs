//! The PDE on the body-fitted annulus: a Fourier (s) by Chebyshev (r)
//! coefficient-space collocation with Dirichlet rows on both edges, solved
//! by GMRES preconditioned with the exact inverse for a circular annulus.

use crate::geometry::AnnularGrid;
use crate::gridsolve::PdeKind;
use crate::numerics::dense::SmallLu;
use crate::numerics::{chebyshev, fft, gmres, AnnularField};
use crate::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Rectangular collocation of L on the tensor grid with n(M+2) Chebyshev
/// coefficient unknowns (index j(M+2)+m) and nM + 2n equations: operator
/// rows (index jM+k), then u = 0 on Γ, then u = 0 on I.
#[derive(Clone, Debug)]
pub struct AnnularOperator {
    n: usize,
    m: usize,
    pde: PdeKind,
    /// T_m, dT_m/dr and d²T_m/dr² at the radial nodes, shape (M, K).
    d0: Array2<f64>,
    d1: Array2<f64>,
    d2: Array2<f64>,
    /// Geometric factors at (s_j, r_k), shape (n, M).
    c_r: Array2<f64>,
    c_ss: Array2<f64>,
    c_s: Array2<f64>,
}

fn radial_matrices(m: usize, kk: usize, r_outer: f64) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
    let x = chebyshev::nodes(m);
    let to = |d: usize, scale: f64| {
        let rows = chebyshev::derivative_matrix(&x, kk, d);
        Array2::from_shape_fn((m, kk), |(i, j)| rows[i][j] * scale)
    };
    let g = 2.0 / r_outer;
    (to(0, 1.0), to(1, g), to(2, g * g))
}

impl AnnularOperator {
    pub fn new(annulus: &AnnularGrid, pde: PdeKind) -> Self {
        let (n, m) = (annulus.n(), annulus.m);
        let curve = &annulus.curve;
        let (d0, d1, d2) = radial_matrices(m, m + 2, annulus.r_outer());
        let dphi = fft::derivative(&curve.speed, 1, 2.0 * PI);
        let dkap = fft::derivative(&curve.curvature, 1, 2.0 * PI);
        let mut c_r = Array2::zeros((n, m));
        let mut c_ss = Array2::zeros((n, m));
        let mut c_s = Array2::zeros((n, m));
        for j in 0..n {
            let (phi, kap) = (curve.speed[j], curve.curvature[j]);
            for (k, &r) in annulus.r.iter().enumerate() {
                let psi = phi * (1.0 + r * kap);
                let psi_s = dphi[j] * (1.0 + r * kap) + phi * r * dkap[j];
                c_r[[j, k]] = kap / (1.0 + r * kap);
                c_ss[[j, k]] = 1.0 / (psi * psi);
                c_s[[j, k]] = -psi_s / (psi * psi * psi);
            }
        }
        Self { n, m, pde, d0, d1, d2, c_r, c_ss, c_s }
    }

    pub fn unknowns(&self) -> usize {
        self.n * (self.m + 2)
    }

    pub fn equations(&self) -> usize {
        self.n * self.m + 2 * self.n
    }

    /// Values, r- and rr-derivatives at the nodes for coefficients `c`
    /// laid out (n, K).
    fn radial(&self, c: &Array2<f64>) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
        let kk = c.ncols();
        let (d0, d1, d2) = if kk == self.m + 2 {
            (self.d0.view(), self.d1.view(), self.d2.view())
        } else {
            panic!("coefficient width {kk} does not match M + 2 = {}", self.m + 2);
        };
        (c.dot(&d0.t()), c.dot(&d1.t()), c.dot(&d2.t()))
    }

    /// L u at the tensor nodes from coefficients laid out (n, M+2).
    pub fn apply_nodes(&self, c: &Array2<f64>) -> Array2<f64> {
        let (u, ur, urr) = self.radial(c);
        let mut out = Array2::zeros((self.n, self.m));
        for k in 0..self.m {
            let col = u.column(k).to_vec();
            let mut spec = fft::forward(&col);
            let mut spec2 = spec.clone();
            fft::apply_derivative(&mut spec, 1, 2.0 * PI);
            fft::apply_derivative(&mut spec2, 2, 2.0 * PI);
            let us = fft::inverse_real(&spec);
            let uss = fft::inverse_real(&spec2);
            for j in 0..self.n {
                let lap = urr[[j, k]] + self.c_r[[j, k]] * ur[[j, k]] + self.c_ss[[j, k]] * uss[j] + self.c_s[[j, k]] * us[j];
                out[[j, k]] = match self.pde {
                    PdeKind::Poisson => lap,
                    PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha * u[[j, k]] - lap,
                };
            }
        }
        out
    }

    /// Full rectangular system applied to a flat coefficient vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let kk = self.m + 2;
        let c = Array2::from_shape_vec((self.n, kk), x.to_vec()).expect("coefficient length");
        let mut out = self.apply_nodes(&c).into_raw_vec_and_offset().0;
        for j in 0..self.n {
            let row = c.row(j);
            out.push(row.iter().enumerate().map(|(m, v)| if m % 2 == 0 { *v } else { -*v }).sum());
        }
        for j in 0..self.n {
            out.push(c.row(j).sum());
        }
        out
    }
}

/// L u on the tensor nodes for any field on the annulus.
pub fn apply_operator(annulus: &AnnularGrid, u: &AnnularField, pde: PdeKind) -> AnnularField {
    let op = AnnularOperator::new(annulus, pde);
    let kk = annulus.m + 2;
    let mut c = Array2::zeros((annulus.n(), kk));
    let w = u.coeffs().ncols().min(kk);
    c.slice_mut(ndarray::s![.., ..w]).assign(&u.coeffs().slice(ndarray::s![.., ..w]));
    let vals = op.apply_nodes(&c);
    AnnularField::from_values(vals, annulus.r_outer())
}

/// Exact inverse of the rectangular system for the circular annulus with
/// constant speed φ₀ and curvature κ₀, one factorized (M+2)² block per
/// Fourier mode.
#[derive(Clone, Debug)]
pub struct CircularPreconditioner {
    n: usize,
    m: usize,
    pub phi0: f64,
    pub kappa0: f64,
    /// Factorization per FFT index (modes ±k share one).
    blocks: Vec<SmallLu>,
}

impl CircularPreconditioner {
    pub fn new(annulus: &AnnularGrid, pde: PdeKind) -> Result<Self> {
        let (n, m) = (annulus.n(), annulus.m);
        let kk = m + 2;
        let curve = &annulus.curve;
        let phi0 = curve.speed.iter().sum::<f64>() / n as f64;
        let kappa0 = curve.curvature.iter().sum::<f64>() / n as f64;
        let (d0, d1, d2) = radial_matrices(m, kk, annulus.r_outer());
        let waves = fft::wavenumbers(n);
        let mut blocks = Vec::with_capacity(n / 2 + 1);
        for &q in waves.iter().take(n / 2 + 1) {
            // the Nyquist index carries −n/2, so q² matches U_ss there
            let q2 = if n % 2 == 0 && q as usize == n / 2 { (n / 2) as f64 } else { q };
            let q2 = q2 * q2;
            let mut a = vec![0.0; kk * kk];
            for (k, &r) in annulus.r.iter().enumerate() {
                let psi = phi0 * (1.0 + r * kappa0);
                let cr = kappa0 / (1.0 + r * kappa0);
                for mm in 0..kk {
                    let lap = d2[[k, mm]] + cr * d1[[k, mm]] - q2 / (psi * psi) * d0[[k, mm]];
                    a[k * kk + mm] = match pde {
                        PdeKind::Poisson => lap,
                        PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha * d0[[k, mm]] - lap,
                    };
                }
            }
            for mm in 0..kk {
                a[m * kk + mm] = if mm % 2 == 0 { 1.0 } else { -1.0 };
                a[(m + 1) * kk + mm] = 1.0;
            }
            let lu = SmallLu::new(a, kk).map_err(|_| {
                Error::Rejected(format!("circular annulus preconditioner singular at Fourier mode {q}; check R"))
            })?;
            blocks.push(lu);
        }
        Ok(Self { n, m, phi0, kappa0, blocks })
    }

    /// Coefficients (flat, index j(M+2)+m) from a full right-hand side.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let (n, m) = (self.n, self.m);
        let kk = m + 2;
        // spectra of each equation group along s
        let mut rows: Vec<Vec<C64>> = Vec::with_capacity(kk);
        for k in 0..m {
            rows.push(fft::forward(&(0..n).map(|j| y[j * m + k]).collect::<Vec<_>>()));
        }
        rows.push(fft::forward(&y[n * m..n * m + n]));
        rows.push(fft::forward(&y[n * m + n..n * m + 2 * n]));
        let mut coef: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; kk];
        let mut re = vec![0.0; kk];
        let mut im = vec![0.0; kk];
        for q in 0..n {
            let block = &self.blocks[q.min(n - q)];
            for e in 0..kk {
                re[e] = rows[e][q].re;
                im[e] = rows[e][q].im;
            }
            block.solve_in_place(&mut re);
            block.solve_in_place(&mut im);
            for mm in 0..kk {
                coef[mm][q] = C64::new(re[mm], im[mm]);
            }
        }
        let mut out = vec![0.0; n * kk];
        for (mm, spec) in coef.into_iter().enumerate() {
            for (j, v) in fft::inverse_complex(spec).into_iter().enumerate() {
                out[j * kk + mm] = v.re;
            }
        }
        out
    }
}

pub fn build_preconditioner(annulus: &AnnularGrid, pde: PdeKind) -> Result<CircularPreconditioner> {
    CircularPreconditioner::new(annulus, pde)
}

#[derive(Clone, Debug)]
pub struct AnnularSolution {
    /// Coefficients (n, M+2), values at the M radial nodes.
    pub field: AnnularField,
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// Solve L u = f on the annulus with u = 0 on Γ and on I.
pub fn solve_annular(
    annulus: &AnnularGrid,
    op: &AnnularOperator,
    pre: &CircularPreconditioner,
    f: &Array2<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<AnnularSolution> {
    let (n, m) = (annulus.n(), annulus.m);
    assert_eq!(f.dim(), (n, m));
    let mut rhs: Vec<f64> = f.iter().cloned().collect();
    rhs.extend(std::iter::repeat_n(0.0, 2 * n));
    let out = gmres::gmres(|x| op.apply(x), |y| pre.apply(y), &rhs, tol, max_iter).map_err(|e| match e {
        Error::NoConvergence { iterations, residual, history, best, .. } => Error::NoConvergence {
            stage: "annular solve",
            iterations,
            residual,
            history,
            best,
        },
        other => other,
    })?;
    let coeffs = Array2::from_shape_vec((n, m + 2), out.x).expect("coefficient length");
    Ok(AnnularSolution {
        field: AnnularField::from_coeffs(coeffs, m, annulus.r_outer()),
        iterations: out.iterations,
        history: out.history,
    })
}
