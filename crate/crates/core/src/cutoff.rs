//! Regularized Heaviside step H built from a prolate spheroidal bump, the
//! cutoff η it induces near the boundary, and the compatibility bump ξ.

use crate::geometry::{AnnularGrid, GridClassification, Label, RegularGrid};
use crate::numerics::chebyshev;
use crate::{reject, Error, Result};
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepProfile {
    Prolate,
    /// Scaled error function; kept for comparison and debugging.
    Erf,
}

#[derive(Clone, Debug)]
pub struct StepFunction {
    pub b: u32,
    pub profile: StepProfile,
    /// Chebyshev coefficients of H on x ∈ [−1, 1]; t = (x + 1)/2 ∈ [0, 1].
    step: Vec<f64>,
    /// Chebyshev coefficients of the unit-mass bump B = dH/dx on [−1, 1].
    bump: Vec<f64>,
}

/// Lowest-order prolate spheroidal wavefunction ψ₀(x; c) as Chebyshev
/// coefficients, from the tridiagonal form of the prolate operator in the
/// even normalized Legendre polynomials.
fn prolate_coeffs(c: f64) -> Result<Vec<f64>> {
    let terms = ((0.75 * c) as usize + 40).max(24);
    let c2 = c * c;
    let mut a = Array2::<f64>::zeros((terms, terms));
    for i in 0..terms {
        let k = (2 * i) as f64;
        a[[i, i]] = k * (k + 1.0) + c2 * (2.0 * k * (k + 1.0) - 1.0) / ((2.0 * k + 3.0) * (2.0 * k - 1.0));
        if i + 1 < terms {
            let off = c2 * (k + 2.0) * (k + 1.0) / ((2.0 * k + 3.0) * ((2.0 * k + 1.0) * (2.0 * k + 5.0)).sqrt());
            a[[i, i + 1]] = off;
            a[[i + 1, i]] = off;
        }
    }
    let (_, v) = a.eigh(UPLO::Upper).map_err(|e| Error::Lapack(e.to_string()))?;
    let beta: Array1<f64> = v.column(0).to_owned();
    let psi = |x: f64| {
        // normalized Legendre recurrence, summing the even degrees
        let (mut p0, mut p1) = (1.0, x);
        let mut acc = beta[0] * (0.5f64).sqrt();
        for l in 1..2 * terms - 1 {
            let lf = l as f64;
            let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
            p0 = p1;
            p1 = p2;
            if (l + 1) % 2 == 0 {
                acc += beta[(l + 1) / 2] * (lf + 1.5).sqrt() * p1;
            }
        }
        acc
    };
    let mut coeffs = chebyshev::fit(psi, 4 * terms + 16);
    if chebyshev::eval(&coeffs, 0.0) < 0.0 {
        coeffs.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(coeffs)
}

fn truncate(mut c: Vec<f64>, rel: f64) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while c.len() > 1 && c.last().is_some_and(|v| v.abs() <= rel * scale) {
        c.pop();
    }
    c
}

impl StepFunction {
    pub fn new(b: u32) -> Result<Self> {
        Self::with_profile(b, StepProfile::Prolate)
    }

    pub fn with_profile(b: u32, profile: StepProfile) -> Result<Self> {
        if !(1..=200).contains(&b) {
            return reject(format!("step bandwidth b = {b} outside 1..=200"));
        }
        // bandwidth b/4 in the discrete window corresponds to c = πb/4
        let c = std::f64::consts::PI * b as f64 / 4.0;
        let raw = match profile {
            StepProfile::Prolate => prolate_coeffs(c)?,
            StepProfile::Erf => {
                // ψ₀(x; c) ≈ exp(−cx²/2) for large c
                let n = (4.0 * c) as usize + 64;
                chebyshev::fit(|x| (-0.5 * c * x * x).exp(), n)
            }
        };
        let anti = chebyshev::antiderivative_coeffs(&raw);
        let mass = chebyshev::eval(&anti, 1.0);
        let bump = truncate(raw.iter().map(|v| v / mass).collect(), 1e-15);
        let step = truncate(anti.iter().map(|v| v / mass).collect(), 1e-15);
        Ok(Self { b, profile, step, bump })
    }

    /// Shared instance per (b, profile), built on first use.
    pub fn cached(b: u32, profile: StepProfile) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, StepProfile), Arc<StepFunction>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().expect("step cache").get(&(b, profile)) {
            return Ok(s.clone());
        }
        let s = Arc::new(Self::with_profile(b, profile)?);
        cache.lock().expect("step cache").insert((b, profile), s.clone());
        Ok(s)
    }

    /// H(t) for t ∈ [0, 1]; 0 below and 1 above.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            chebyshev::eval(&self.step, 2.0 * t - 1.0)
        }
    }

    /// dH/dt on [0, 1], zero outside.
    pub fn derivative(&self, t: f64) -> f64 {
        if (0.0..=1.0).contains(&t) {
            2.0 * chebyshev::eval(&self.bump, 2.0 * t - 1.0)
        } else {
            0.0
        }
    }

    /// Unit-mass bump on x ∈ [−1, 1], zero outside.
    pub fn bump(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 {
            chebyshev::eval(&self.bump, x)
        } else {
            0.0
        }
    }

    pub fn step_coeffs(&self) -> &[f64] {
        &self.step
    }

    pub fn bump_coeffs(&self) -> &[f64] {
        &self.bump
    }
}

/// η at signed offset r in an annulus of width R on the given side.
pub fn eta_of_r(step: &StepFunction, annulus: &AnnularGrid, r: f64) -> f64 {
    step.eval(annulus.side.sign() * r / annulus.big_r)
}

/// η on the grid (indexed [iy, ix]) and on the annular tensor nodes.
pub fn eval_eta(cls: &GridClassification, grid: &RegularGrid, annulus: &AnnularGrid, step: &StepFunction) -> (Array2<f64>, Array2<f64>) {
    let g = &grid.spec;
    let mut on_grid = Array2::zeros((g.ny, g.nx));
    let flat = on_grid.as_slice_mut().expect("standard layout");
    for &i in &cls.faithful {
        flat[i] = 1.0;
    }
    for (&i, &(_, r)) in cls.annulus.iter().zip(&cls.coords) {
        flat[i] = eta_of_r(step, annulus, r);
    }
    let column: Vec<f64> = annulus.r.iter().map(|&r| eta_of_r(step, annulus, r)).collect();
    let on_annulus = Array2::from_shape_fn((annulus.n(), annulus.m), |(_, k)| column[k]);
    (on_grid, on_annulus)
}

/// Default bump center in the wiggle room: `pad` nodes beyond the padded
/// extrema of Γ in +x and +y.
pub fn default_bump_center(grid: &RegularGrid, pad: usize) -> [f64; 2] {
    let d = pad as f64 * grid.h();
    [grid.x_max + d, grid.y_max + d]
}

/// Radial bump ξ(x) = B(|x − center|/radius) scaled to unit discrete mass
/// (Σ ξ h² = 1). Rejected if it touches any node of Ω.
pub fn build_bump_xi(grid: &RegularGrid, cls: &GridClassification, center: [f64; 2], radius: f64, step: &StepFunction) -> Result<Array2<f64>> {
    let mut xi = grid.spec.sample(|x, y| step.bump((x - center[0]).hypot(y - center[1]) / radius));
    let mass: f64 = xi.sum() * grid.h() * grid.h();
    if !(mass > 0.0) {
        return reject("compatibility bump has no mass on the grid");
    }
    xi.mapv_inplace(|v| v / mass);
    let flat = xi.as_slice().expect("standard layout");
    if let Some(i) = (0..flat.len()).find(|&i| flat[i] != 0.0 && cls.labels[i] != Label::Exterior) {
        return reject(format!("compatibility bump overlaps the domain at grid node {i}"));
    }
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_midpoint() {
        for b in [1, 4, 12, 24, 60, 200] {
            let h = StepFunction::new(b).unwrap();
            assert!(chebyshev::eval(&h.step, -1.0).abs() < 1e-13, "b={b}");
            assert!((chebyshev::eval(&h.step, 1.0) - 1.0).abs() < 1e-13, "b={b}");
            assert!((h.eval(0.5) - 0.5).abs() < 1e-13, "b={b}");
        }
    }

    #[test]
    fn monotone() {
        for b in [2, 12, 40, 150] {
            let h = StepFunction::new(b).unwrap();
            let mut prev = 0.0;
            for i in 0..=1000 {
                let v = h.eval(i as f64 / 1000.0);
                assert!(v >= prev - 1e-15, "b={b} i={i}");
                prev = v;
            }
        }
    }

    #[test]
    fn wider_bandwidth_is_flatter_at_edges() {
        let (h12, h24) = (StepFunction::new(12).unwrap(), StepFunction::new(24).unwrap());
        for t in [0.0, 1.0] {
            assert!(h24.derivative(t) <= h12.derivative(t));
        }
        assert!(h24.derivative(0.5) > h12.derivative(0.5));
    }

    #[test]
    fn step_derivative_matches_bump() {
        for b in [3, 12, 77] {
            let h = StepFunction::new(b).unwrap();
            let d = chebyshev::derivative_coeffs(&h.step);
            for i in 0..=200 {
                let x = -1.0 + 2.0 * i as f64 / 200.0;
                assert!((chebyshev::eval(&d, x) - h.bump(x)).abs() < 1e-10, "b={b} x={x}");
            }
        }
    }

    #[test]
    fn prolate_is_an_eigenfunction_of_the_sinc_kernel() {
        // ∫ sin(c(x−y))/(π(x−y)) ψ(y) dy = λ ψ(x), checked with Gauss–Chebyshev
        let c = std::f64::consts::PI * 12.0 / 4.0;
        let coeffs = prolate_coeffs(c).unwrap();
        let n = 400;
        let nodes = chebyshev::nodes(n);
        let w = std::f64::consts::PI / n as f64;
        let apply = |x: f64| {
            nodes
                .iter()
                .map(|&y| {
                    let d = x - y;
                    let k = if d.abs() < 1e-12 { c / std::f64::consts::PI } else { (c * d).sin() / (std::f64::consts::PI * d) };
                    k * chebyshev::eval(&coeffs, y) * (1.0 - y * y).sqrt() * w
                })
                .sum::<f64>()
        };
        let lambda = apply(0.0) / chebyshev::eval(&coeffs, 0.0);
        assert!(lambda > 0.99 && lambda <= 1.0 + 1e-9);
        for x in [-0.9, -0.5, 0.1, 0.7] {
            assert!((apply(x) - lambda * chebyshev::eval(&coeffs, x)).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn erf_fallback_normalized() {
        let h = StepFunction::with_profile(12, StepProfile::Erf).unwrap();
        assert!(h.eval(0.0).abs() < 1e-15 && (h.eval(1.0) - 1.0).abs() < 1e-15);
        assert!((h.eval(0.5) - 0.5).abs() < 1e-13);
    }

    #[test]
    fn rejects_bandwidth() {
        assert!(StepFunction::new(0).is_err());
        assert!(StepFunction::new(201).is_err());
    }
}
