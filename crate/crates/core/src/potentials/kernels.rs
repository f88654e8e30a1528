//! Free-space Green's functions and their normal derivatives.

use crate::gridsolve::PdeKind;
use crate::numerics::bessel;
use crate::{reject, Result};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerKind {
    Single,
    Double,
}

/// G(x, y) = −(2π)⁻¹ ln|x − y| for Poisson, K₀(α|x − y|)/(2π) for
/// (α² − Δ). Both satisfy L G = −δ with L the operator of [`PdeKind`]
/// up to its sign, i.e. ΔG = −δ and (α² − Δ)G = δ.
#[derive(Clone, Copy, Debug)]
pub struct KernelSet {
    pub pde: PdeKind,
}

impl KernelSet {
    pub fn new(pde: PdeKind) -> Self {
        Self { pde }
    }

    /// G at separation d = x − y with ρ² = |d|² > 0.
    #[inline]
    pub fn g(&self, rho2: f64) -> f64 {
        match self.pde {
            PdeKind::Poisson => -rho2.ln() / (4.0 * PI),
            PdeKind::ModifiedHelmholtz { alpha } => bessel::k0(alpha * rho2.sqrt()) / (2.0 * PI),
        }
    }

    /// ∂G/∂n_y at separation d = x − y.
    #[inline]
    pub fn dg_dny(&self, d: [f64; 2], ny: [f64; 2]) -> f64 {
        let rho2 = d[0] * d[0] + d[1] * d[1];
        // (y − x)·n_y
        let proj = -(d[0] * ny[0] + d[1] * ny[1]);
        match self.pde {
            PdeKind::Poisson => -proj / (2.0 * PI * rho2),
            PdeKind::ModifiedHelmholtz { alpha } => {
                let rho = rho2.sqrt();
                -alpha * bessel::k1(alpha * rho) * proj / (2.0 * PI * rho)
            }
        }
    }

    pub fn kernel_eval(&self, x: [f64; 2], y: [f64; 2], kind: LayerKind, ny: [f64; 2]) -> Result<f64> {
        let d = [x[0] - y[0], x[1] - y[1]];
        let rho2 = d[0] * d[0] + d[1] * d[1];
        if rho2 == 0.0 {
            return reject("kernel evaluated at coincident points");
        }
        Ok(match kind {
            LayerKind::Single => self.g(rho2),
            LayerKind::Double => self.dg_dny(d, ny),
        })
    }
}
