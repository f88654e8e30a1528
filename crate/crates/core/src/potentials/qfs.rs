//! Close evaluation of S σ − D γ by an equivalent single layer on a
//! displaced source curve, matched to the one-sided on-surface limit.

use super::kernels::KernelSet;
use super::kress::{layer_matrices, LayerMatrices};
use crate::geometry::BoundaryCurve;
use crate::numerics::dense::DenseLu;
use crate::numerics::fft;
use crate::{reject, Result};
use ndarray::{Array1, Array2, ArrayView1};
use std::f64::consts::PI;
use std::sync::Arc;

/// Where targets lie relative to the curve's outward normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalSide {
    Inside,
    Outside,
}

#[derive(Clone, Copy, Debug)]
pub struct QfsOptions {
    /// Source displacement in units of the local source spacing.
    pub spacing_factor: f64,
    /// Check and source points per curve node.
    pub upsample: usize,
    /// Largest displacement as a fraction of the distance to coordinate
    /// collapse on the source side.
    pub collapse_fraction: f64,
    pub rcond_min: f64,
}

impl Default for QfsOptions {
    fn default() -> Self {
        Self { spacing_factor: 5.0, upsample: 1, collapse_fraction: 0.7, rcond_min: 1e-15 }
    }
}

/// Check points per node: the requested upsampling times max(1, ⌈αh⌉) so
/// that the source spacing stays below the kernel's decay length.
pub fn check_factor(curve: &BoundaryCurve, kernels: &KernelSet, opts: &QfsOptions) -> usize {
    let a = kernels.pde.alpha();
    opts.upsample.max(1) * ((a * curve.h_max()).ceil() as usize).max(1)
}

/// On-surface operators on the check points of `curve`, shareable by the
/// two sides of one curve.
pub fn qfs_layers(curve: &BoundaryCurve, kernels: &KernelSet, opts: &QfsOptions) -> Result<Arc<LayerMatrices>> {
    Ok(Arc::new(layer_matrices(curve, kernels, check_factor(curve, kernels, opts))?))
}

pub struct EffectiveSource {
    pub side: EvalSide,
    pub kernels: KernelSet,
    pub sources: Vec<[f64; 2]>,
    /// Trapezoid weights 2πφ_j/N_s.
    pub weights: Vec<f64>,
    /// Displacement of each source from the check curve.
    pub rho: Vec<f64>,
    layers: Arc<LayerMatrices>,
    lu: DenseLu,
    n: usize,
}

impl std::fmt::Debug for EffectiveSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EffectiveSource")
            .field("side", &self.side)
            .field("n_sources", &self.sources.len())
            .field("rcond", &self.lu.rcond())
            .finish()
    }
}

pub fn qfs_build(curve: &BoundaryCurve, layers: Arc<LayerMatrices>, side: EvalSide, kernels: KernelSet, opts: &QfsOptions) -> Result<EffectiveSource> {
    let check = &layers.check;
    let ns = check.len();
    // sources go to the far side from the targets
    let dir = match side {
        EvalSide::Inside => 1.0,
        EvalSide::Outside => -1.0,
    };
    let collapse = check
        .curvature
        .iter()
        .filter(|&&k| dir * k < 0.0)
        .map(|k| 1.0 / k.abs())
        .fold(f64::INFINITY, f64::min);
    let cap = opts.collapse_fraction * collapse;
    let ds = 2.0 * PI / ns as f64;
    let mut sources = Vec::with_capacity(ns);
    let mut weights = Vec::with_capacity(ns);
    let mut rho = Vec::with_capacity(ns);
    for j in 0..ns {
        let spacing = check.speed[j] * ds;
        let r = (opts.spacing_factor * spacing).min(cap);
        if !(1.0 + dir * r * check.curvature[j] > 0.0) {
            return reject("effective source curve self-intersects");
        }
        let (p, nn) = (check.points[j], check.normals[j]);
        sources.push([p[0] + dir * r * nn[0], p[1] + dir * r * nn[1]]);
        weights.push(spacing);
        rho.push(r);
    }
    let a = Array2::from_shape_fn((ns, ns), |(i, j)| {
        let c = check.points[i];
        let s = sources[j];
        kernels.g((c[0] - s[0]).powi(2) + (c[1] - s[1]).powi(2)) * weights[j]
    });
    let lu = DenseLu::new(&a, opts.rcond_min, "effective source constraint matrix")?;
    Ok(EffectiveSource { side, kernels, sources, weights, rho, layers, lu, n: curve.len() })
}

impl EffectiveSource {
    pub fn n_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn rcond(&self) -> f64 {
        self.lu.rcond()
    }

    pub fn check_points(&self) -> &[[f64; 2]] {
        &self.layers.check.points
    }

    /// One-sided limit of S σ − D γ at the check points.
    pub fn limit_data(&self, sigma: Option<&[f64]>, gamma: &[f64]) -> Array1<f64> {
        assert_eq!(gamma.len(), self.n);
        let l = &self.layers;
        let g = ArrayView1::from(gamma);
        let mut b = -l.double.dot(&g);
        if let Some(s) = sigma {
            b += &l.single.dot(&ArrayView1::from(s));
        }
        let half = match self.side {
            EvalSide::Inside => 0.5,
            EvalSide::Outside => -0.5,
        };
        let gc = if l.check.len() == self.n { gamma.to_vec() } else { fft::resample(gamma, l.check.len()) };
        for (bi, gi) in b.iter_mut().zip(gc) {
            *bi += half * gi;
        }
        b
    }

    /// Effective density ζ for densities (σ, γ) at the curve nodes.
    pub fn solve(&self, sigma: Option<&[f64]>, gamma: &[f64]) -> Vec<f64> {
        let b = self.limit_data(sigma, gamma);
        self.lu.solve(b.view()).to_vec()
    }

    /// Σ_j G(x, y_j) w_j ζ_j at each target.
    pub fn eval(&self, zeta: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
        eval_sources(&self.kernels, &self.sources, &self.weights, zeta, targets)
    }

    /// n·∇ of the represented potential at each target.
    pub fn eval_normal_derivative(&self, zeta: &[f64], targets: &[[f64; 2]], normals: &[[f64; 2]]) -> Vec<f64> {
        targets
            .iter()
            .zip(normals)
            .map(|(t, n)| {
                let mut acc = 0.0;
                for j in 0..self.sources.len() {
                    let s = self.sources[j];
                    let d = [t[0] - s[0], t[1] - s[1]];
                    // n·∇_x G(x − y) = −∂G/∂n_y taken with n_y = n
                    acc -= self.kernels.dg_dny(d, *n) * self.weights[j] * zeta[j];
                }
                acc
            })
            .collect()
    }
}

/// Weighted point-source single layer at the targets.
pub fn eval_sources(kernels: &KernelSet, sources: &[[f64; 2]], weights: &[f64], zeta: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
    let q: Vec<f64> = zeta.iter().zip(weights).map(|(z, w)| z * w).collect();
    super::boxsum::sum_point_sources(kernels.pde, sources, &q, targets)
}

/// Plain trapezoid evaluation of S σ − D γ off the curve; spectrally
/// accurate only several node spacings away.
pub fn eval_layers_direct(curve: &BoundaryCurve, kernels: &KernelSet, sigma: Option<&[f64]>, gamma: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
    let w = curve.ds();
    targets
        .iter()
        .map(|t| {
            let mut acc = 0.0;
            for j in 0..curve.len() {
                let y = curve.points[j];
                let d = [t[0] - y[0], t[1] - y[1]];
                let wj = w * curve.speed[j];
                if let Some(s) = sigma {
                    acc += kernels.g(d[0] * d[0] + d[1] * d[1]) * s[j] * wj;
                }
                acc -= kernels.dg_dny(d, curve.normals[j]) * gamma[j] * wj;
            }
            acc
        })
        .collect()
}
