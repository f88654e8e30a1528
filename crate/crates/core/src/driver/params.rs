//! Discretization parameters: the default policy driven by a length scale
//! h, and the fixed-M and proportional-M refinement studies.

use crate::geometry::{build_computational_domain, compute_rmax, default_rmax_cap, BoundaryCurve, Parametrization, RegularGrid, Side};
use crate::gridsolve::PdeKind;
use crate::{reject, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// User-forced values; anything left `None` follows the policy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub b: Option<u32>,
    pub eps: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Regular grid spacing.
    pub h: f64,
    pub big_r: f64,
    pub n: usize,
    pub m: usize,
    pub nx: usize,
    pub ny: usize,
    pub b: u32,
    pub eps: f64,
    pub r_max: f64,
    /// Wiggle room in +x and +y (zero without a nullspace).
    pub w: f64,
    /// Distance of the compatibility bump center from the padded extrema,
    /// in grid nodes.
    pub bump_pad: usize,
    /// Support radius of the compatibility bump.
    pub bump_radius: f64,
}

pub const DEFAULT_EPS: f64 = 1e-14;
const SCAN_NODES: usize = 2048;

/// Largest boundary and interface node spacing per unit Δs: φ max(1, 1 + rκ).
fn spacing_factor(curve: &BoundaryCurve, r_outer: f64) -> f64 {
    (0..curve.len())
        .map(|j| curve.speed[j] * (1.0 + r_outer * curve.curvature[j]).max(1.0))
        .fold(0.0, f64::max)
}

fn max_spacing(curve: &BoundaryCurve, r_outer: f64) -> f64 {
    spacing_factor(curve, r_outer) * curve.ds()
}

/// Grid-dependent parts shared by every mode.
fn finish(curve: &BoundaryCurve, pde: PdeKind, h: f64, big_r: f64, n: usize, m: usize, b: u32, eps: f64, r_max: f64) -> Result<(Params, RegularGrid)> {
    if m < 4 {
        return reject(format!("M = {m} < 4; decrease h"));
    }
    if !(big_r > 0.0 && big_r < r_max) {
        return reject(format!("R = {big_r:.6} must lie in (0, R_max = {r_max:.6})"));
    }
    if b == 0 {
        return reject("bandwidth b must be positive");
    }
    // the bump spans twice the transition width and must clear the box edge
    let bump_radius = 2.0 * big_r;
    let bump_pad = m.max((bump_radius / h).ceil() as usize + 1);
    let w = if pde.has_nullspace() { 2.0 * bump_pad as f64 * h } else { 0.0 };
    let grid = build_computational_domain(curve, h, w);
    let p = Params { h, big_r, n, m, nx: grid.spec.nx, ny: grid.spec.ny, b, eps, r_max, w, bump_pad, bump_radius };
    Ok((p, grid))
}

/// Default policy: R = R_max/2, N the smallest even count with every
/// boundary and interface spacing below h, M = ⌈πR/(2h)⌉, b = ⌈2R/h⌉.
pub fn select_parameters(param: &dyn Parametrization, h: f64, pde: PdeKind, ov: &Overrides) -> Result<(Params, BoundaryCurve)> {
    if !(h > 0.0) {
        return reject(format!("h = {h} must be positive"));
    }
    let scan = BoundaryCurve::from_parametrization(param, SCAN_NODES)?;
    let r_max = compute_rmax(&scan, Side::Interior, default_rmax_cap(&scan))?;
    let big_r = ov.big_r.unwrap_or(0.5 * r_max);
    if big_r >= r_max {
        return reject(format!("R = {big_r:.6} ≥ R_max = {r_max:.6}"));
    }
    let n = match ov.n {
        Some(n) => n,
        None => {
            let factor = spacing_factor(&scan, -big_r);
            let mut n = 2 * ((2.0 * PI * factor / h / 2.0).floor() as usize + 1);
            n = n.max(16);
            // the scan is spectrally exact, but confirm on the final nodes
            loop {
                let c = BoundaryCurve::from_parametrization(param, n)?;
                if max_spacing(&c, -big_r) < h {
                    break n;
                }
                n += 2;
            }
        }
    };
    let curve = BoundaryCurve::from_parametrization(param, n)?;
    let m = ov.m.unwrap_or((PI * big_r / (2.0 * h)).ceil() as usize);
    let b = ov.b.unwrap_or((2.0 * big_r / h).ceil() as u32);
    let eps = ov.eps.unwrap_or(DEFAULT_EPS);
    let r_max = compute_rmax(&curve, Side::Interior, default_rmax_cap(&curve))?;
    let (p, _) = finish(&curve, pde, h, big_r, n, m, b, eps, r_max)?;
    Ok((p, curve))
}

/// Fixed-M study: R = M h_min, h = h_min/2, b = ⌈1.5M⌉ at a given N.
pub fn fixed_m_parameters(param: &dyn Parametrization, n: usize, m: usize, pde: PdeKind, ov: &Overrides) -> Result<(Params, BoundaryCurve)> {
    let curve = BoundaryCurve::from_parametrization(param, n)?;
    let h_min = curve.h_min();
    let big_r = ov.big_r.unwrap_or(m as f64 * h_min);
    let h = h_min / 2.0;
    let b = ov.b.unwrap_or((1.5 * m as f64).ceil() as u32);
    let eps = ov.eps.unwrap_or(DEFAULT_EPS);
    let r_max = compute_rmax(&curve, Side::Interior, default_rmax_cap(&curve))?;
    let (p, _) = finish(&curve, pde, h, big_r, n, m, b, eps, r_max)?;
    Ok((p, curve))
}

/// M = ⌊γN/100⌋ clamped to [4, 40].
pub fn proportional_m(n: usize, gamma: f64) -> usize {
    ((gamma * n as f64 / 100.0).floor() as usize).clamp(4, 40)
}

/// Proportional-M study: M from [`proportional_m`], otherwise as fixed-M.
pub fn proportional_m_parameters(param: &dyn Parametrization, n: usize, gamma: f64, pde: PdeKind, ov: &Overrides) -> Result<(Params, BoundaryCurve)> {
    fixed_m_parameters(param, n, proportional_m(n, gamma), pde, ov)
}

impl Params {
    /// The periodic box these parameters describe.
    pub fn grid(&self, curve: &BoundaryCurve) -> RegularGrid {
        let g = build_computational_domain(curve, self.h, self.w);
        debug_assert_eq!((g.spec.nx, g.spec.ny), (self.nx, self.ny));
        g
    }
}
