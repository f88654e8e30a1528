//! Function intension, periodic compatibility and the FFT solve on the box.

use crate::numerics::SpectralField2D;
use crate::{reject, Result};
use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;

/// The elliptic operator L. Poisson solves Δu = f; modified Helmholtz
/// solves (α² − Δ)u = f.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PdeKind {
    Poisson,
    ModifiedHelmholtz { alpha: f64 },
}

impl PdeKind {
    /// Nonnegative Fourier symbol: |k|² or α² + |k|².
    pub fn symbol(&self, k2: f64) -> f64 {
        match *self {
            PdeKind::Poisson => k2,
            PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha + k2,
        }
    }

    /// Multiplier of L acting on e^{ik·x}: −|k|² or α² + |k|².
    pub fn multiplier(&self, k2: f64) -> f64 {
        match *self {
            PdeKind::Poisson => -k2,
            PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha + k2,
        }
    }

    pub fn has_nullspace(&self) -> bool {
        matches!(self, PdeKind::Poisson)
    }

    /// α², or 0 for Poisson.
    pub fn alpha2(&self) -> f64 {
        match *self {
            PdeKind::Poisson => 0.0,
            PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha2().sqrt()
    }

    pub fn name(&self) -> &'static str {
        match self {
            PdeKind::Poisson => "poisson",
            PdeKind::ModifiedHelmholtz { .. } => "modified_helmholtz",
        }
    }
}

/// f_I = η f, forced to exactly zero where η vanishes so that values of f
/// outside Ω never enter.
pub fn intend(f: &Array2<f64>, eta: &Array2<f64>) -> Array2<f64> {
    Zip::from(f).and(eta).map_collect(|&f, &e| if e == 0.0 { 0.0 } else if e == 1.0 { f } else { e * f })
}

/// f_I − ξ Σ f_I h², which has zero discrete mean when Σ ξ h² = 1.
pub fn enforce_mean_zero(f_i: &Array2<f64>, xi: &Array2<f64>, h: f64) -> Array2<f64> {
    let mass = f_i.sum() * h * h;
    Zip::from(f_i).and(xi).map_collect(|&f, &x| if x == 0.0 { f } else { f - x * mass })
}

/// Invert L on the periodic box by dividing Fourier coefficients by its
/// multiplier; the zero mode of a Poisson solution is set to 0.
pub fn solve_regular(f: &SpectralField2D, pde: PdeKind) -> Result<SpectralField2D> {
    if pde.has_nullspace() {
        let total: f64 = f.values().iter().map(|v| v.abs()).sum();
        let s = f.sum();
        if s.abs() > 1e-12 * total.max(f64::MIN_POSITIVE) {
            return reject(format!("periodic Poisson data has nonzero mean (sum {s:.3e})"));
        }
    }
    Ok(f.apply_symbol(|kx, ky| {
        let m = pde.multiplier(kx * kx + ky * ky);
        if m == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0 / m, 0.0)
        }
    }))
}

/// L applied spectrally on the box.
pub fn apply_regular(u: &SpectralField2D, pde: PdeKind) -> SpectralField2D {
    u.apply_symbol(|kx, ky| C64::new(pde.multiplier(kx * kx + ky * ky), 0.0))
}
