//! Interface jumps, stitching of the regular and annular solutions, the
//! homogeneous boundary correction and the final grid values.

use crate::geometry::{AnnularGrid, BoundaryCurve, GridClassification};
use crate::numerics::interp::{annular_interpolate, nudft2_many};
use crate::numerics::{AnnularField, Edge, SpectralField2D};
use crate::potentials::EffectiveSource;
use crate::Result;
use ndarray::Array2;

/// Value and normal-derivative jumps at the interface nodes, faithful side
/// minus annular side.
#[derive(Clone, Debug)]
pub struct JumpData {
    pub gamma: Vec<f64>,
    pub sigma: Vec<f64>,
}

/// u_r, ∂_x u_r and ∂_y u_r at arbitrary points.
pub fn regular_with_gradient(u_r: &SpectralField2D, points: &[[f64; 2]]) -> Result<[Vec<f64>; 3]> {
    let dx = u_r.derivative(0);
    let dy = u_r.derivative(1);
    let mut out = nudft2_many(&[u_r, &dx, &dy], points)?.into_iter();
    Ok([out.next().unwrap(), out.next().unwrap(), out.next().unwrap()])
}

pub fn compute_jumps(u_r: &SpectralField2D, u_a: &AnnularField, interface: &BoundaryCurve) -> Result<JumpData> {
    let [v, gx, gy] = regular_with_gradient(u_r, &interface.points)?;
    let a = u_a.edge_values(Edge::Interface);
    let da = u_a.r_derivative().edge_values(Edge::Interface);
    let gamma = v.iter().zip(&a).map(|(r, a)| r - a).collect();
    let sigma = interface
        .normals
        .iter()
        .enumerate()
        .map(|(j, n)| n[0] * gx[j] + n[1] * gy[j] - da[j])
        .collect();
    Ok(JumpData { gamma, sigma })
}

/// Effective sources of the interface: `inner` serves targets on the
/// faithful side, `outer` the annulus.
pub struct InterfaceSources {
    pub curve: BoundaryCurve,
    pub inner: EffectiveSource,
    pub outer: EffectiveSource,
}

/// Densities of the stitching potential (S_I σ − D_I γ with the jumps
/// negated) in both effective representations.
#[derive(Clone, Debug)]
pub struct StitchDensities {
    pub zeta_in: Vec<f64>,
    pub zeta_out: Vec<f64>,
}

pub fn stitch_densities(jumps: &JumpData, src: &InterfaceSources) -> StitchDensities {
    let sigma: Vec<f64> = jumps.sigma.iter().map(|v| -v).collect();
    let gamma: Vec<f64> = jumps.gamma.iter().map(|v| -v).collect();
    StitchDensities { zeta_in: src.inner.solve(Some(&sigma), &gamma), zeta_out: src.outer.solve(Some(&sigma), &gamma) }
}

/// u_I: u_r plus the stitching potential at faithful grid nodes (in the
/// order of `cls.faithful`), u_a plus the potential at the annular nodes.
pub struct Stitched {
    pub faithful: Vec<f64>,
    pub annular: AnnularField,
    pub densities: StitchDensities,
}

pub fn stitch(
    u_a: &AnnularField,
    jumps: &JumpData,
    src: &InterfaceSources,
    annulus: &AnnularGrid,
    faithful_points: &[[f64; 2]],
    faithful_u_r: &[f64],
) -> Stitched {
    let densities = stitch_densities(jumps, src);
    let corr = src.inner.eval(&densities.zeta_in, faithful_points);
    let faithful = faithful_u_r.iter().zip(corr).map(|(a, b)| a + b).collect();
    let nodes = annulus.node_list();
    let corr = src.outer.eval(&densities.zeta_out, &nodes);
    let mut values = u_a.values().clone();
    for (v, c) in values.iter_mut().zip(corr) {
        *v += c;
    }
    Stitched { faithful, annular: AnnularField::from_values(values, annulus.r_outer()), densities }
}

/// Boundary data for the homogeneous correction: g − u_I on Γ.
pub fn boundary_discrepancy(stitched: &Stitched, g: &[f64]) -> Vec<f64> {
    let trace = stitched.annular.edge_values(Edge::Boundary);
    g.iter().zip(trace).map(|(g, t)| g - t).collect()
}

/// Effective density of u_H = D_Γ ζ_H for Γ's inward representation.
pub fn homogeneous_density(gamma_src: &EffectiveSource, zeta_h: &[f64]) -> Vec<f64> {
    let neg: Vec<f64> = zeta_h.iter().map(|z| -z).collect();
    gamma_src.solve(None, &neg)
}

/// u = u_I + u_H at faithful grid nodes and annular nodes.
pub struct Corrected {
    pub faithful: Vec<f64>,
    pub annular: AnnularField,
    pub zeta_h_eff: Vec<f64>,
}

pub fn apply_homogeneous_correction(
    stitched: &Stitched,
    zeta_h: &[f64],
    gamma_src: &EffectiveSource,
    annulus: &AnnularGrid,
    faithful_points: &[[f64; 2]],
) -> Corrected {
    let zeta_h_eff = homogeneous_density(gamma_src, zeta_h);
    let uh = gamma_src.eval(&zeta_h_eff, faithful_points);
    let faithful = stitched.faithful.iter().zip(uh).map(|(a, b)| a + b).collect();
    let uh = gamma_src.eval(&zeta_h_eff, &annulus.node_list());
    let mut values = stitched.annular.values().clone();
    for (v, c) in values.iter_mut().zip(uh) {
        *v += c;
    }
    Corrected { faithful, annular: AnnularField::from_values(values, annulus.r_outer()), zeta_h_eff }
}

/// Values at Annulus-labeled grid nodes by interpolating the final annular
/// field at their stored coordinates (order of `cls.annulus`).
pub fn finalize_on_grid(annular: &AnnularField, cls: &GridClassification) -> Result<Vec<f64>> {
    annular_interpolate(annular, &cls.coords)
}

/// Scatter per-region values into a grid array; nodes outside Ω get NaN.
pub fn assemble_grid(shape: (usize, usize), cls: &GridClassification, faithful: &[f64], annulus: &[f64]) -> Array2<f64> {
    let mut out = Array2::from_elem(shape, f64::NAN);
    let flat = out.as_slice_mut().expect("standard layout");
    for (&i, &v) in cls.faithful.iter().zip(faithful) {
        flat[i] = v;
    }
    for (&i, &v) in cls.annulus.iter().zip(annulus) {
        flat[i] = v;
    }
    out
}

/// Largest mismatch of value and normal derivative across I at the
/// midpoints between interface nodes, faithful side against annular side.
pub fn interface_continuity(
    u_r: &SpectralField2D,
    src: &InterfaceSources,
    zeta_in: &[f64],
    annular: &AnnularField,
) -> Result<(f64, f64)> {
    let n = src.curve.len();
    let ds = src.curve.ds();
    let mids: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * ds).collect();
    let frames: Vec<_> = mids.iter().map(|&s| src.curve.frame(s)).collect();
    let pts: Vec<[f64; 2]> = frames.iter().map(|f| f.x).collect();
    let [v, gx, gy] = regular_with_gradient(u_r, &pts)?;
    let normals: Vec<[f64; 2]> = frames.iter().map(|f| f.normal()).collect();
    let c0 = src.inner.eval(zeta_in, &pts);
    let dc = src.inner.eval_normal_derivative(zeta_in, &pts, &normals);
    let ro = annular.r_outer();
    let coords: Vec<(f64, f64)> = mids.iter().map(|&s| (s, ro)).collect();
    let a = annular_interpolate(annular, &coords)?;
    let da = annular_interpolate(&annular.r_derivative(), &coords)?;
    let mut ev: f64 = 0.0;
    let mut ed: f64 = 0.0;
    for j in 0..n {
        let nn = normals[j];
        let inside = v[j] + c0[j];
        let dn_inside = nn[0] * gx[j] + nn[1] * gy[j] + dc[j];
        ev = ev.max((inside - a[j]).abs());
        ed = ed.max((dn_inside - da[j]).abs());
    }
    Ok((ev, ed))
}
