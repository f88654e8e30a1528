//! Off-grid evaluation of spectral representations by direct summation,
//! arranged as dense matrix products so that batches of targets are cheap.

use super::chebyshev;
use super::field::{AnnularField, Edge, SpectralField2D};
use crate::{Error, Result};
use ndarray::{s, Array2};
use std::f64::consts::PI;

const CHUNK: usize = 2048;

/// cos(qθ), sin(qθ) for q = 0..len, by rotation re-anchored every 32 steps.
pub fn fill_cis(theta: f64, cos: &mut [f64], sin: &mut [f64]) {
    let (s1, c1) = theta.sin_cos();
    let (mut c, mut s) = (1.0, 0.0);
    for q in 0..cos.len() {
        if q % 32 == 0 {
            (s, c) = (q as f64 * theta).sin_cos();
        } else {
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
        }
        cos[q] = c;
        sin[q] = s;
    }
}

/// Evaluate the trigonometric interpolant of a grid field at arbitrary points.
pub fn nudft2_interpolate(field: &SpectralField2D, targets: &[[f64; 2]]) -> Result<Vec<f64>> {
    Ok(nudft2_many(&[field], targets)?.pop().unwrap())
}

/// [`nudft2_interpolate`] for several fields on one grid, sharing the
/// target exponentials.
pub fn nudft2_many(fields: &[&SpectralField2D], targets: &[[f64; 2]]) -> Result<Vec<Vec<f64>>> {
    let g = fields[0].grid;
    assert!(fields.iter().all(|f| f.grid == g), "fields must share a grid");
    if let Some(p) = targets.iter().find(|p| !g.contains(**p)) {
        return Err(Error::OutsideDomain(format!("({}, {}) outside the periodic box", p[0], p[1])));
    }
    let (nx, ny) = (g.nx, g.ny);
    let nkx = nx / 2 + 1;
    let halves: Vec<(Array2<f64>, Array2<f64>)> = fields
        .iter()
        .map(|f| {
            let c = f.coeffs();
            let mut re = Array2::zeros((ny, nkx));
            let mut im = Array2::zeros((ny, nkx));
            for iy in 0..ny {
                for q in 0..nkx {
                    let w = if q == 0 || (nx % 2 == 0 && q == nx / 2) { 1.0 } else { 2.0 };
                    re[[iy, q]] = w * c[[iy, q]].re;
                    im[[iy, q]] = w * c[[iy, q]].im;
                }
            }
            (re, im)
        })
        .collect();
    let kyi: Vec<f64> = super::fft::wavenumbers(ny);
    let mut out = vec![Vec::with_capacity(targets.len()); fields.len()];
    let mut cbuf = vec![0.0; nkx];
    let mut sbuf = vec![0.0; nkx];
    for chunk in targets.chunks(CHUNK) {
        let t = chunk.len();
        let mut exr = Array2::zeros((nkx, t));
        let mut exi = Array2::zeros((nkx, t));
        for (i, p) in chunk.iter().enumerate() {
            let th = 2.0 * PI * (p[0] - g.x0) / g.lx();
            fill_cis(th, &mut cbuf, &mut sbuf);
            for q in 0..nkx {
                exr[[q, i]] = cbuf[q];
                exi[[q, i]] = sbuf[q];
            }
        }
        let mut eyr = Array2::zeros((ny, t));
        let mut eyi = Array2::zeros((ny, t));
        for (i, p) in chunk.iter().enumerate() {
            let th = 2.0 * PI * (p[1] - g.y0) / g.ly();
            for (iy, &k) in kyi.iter().enumerate() {
                let (sv, cv) = (k * th).sin_cos();
                eyr[[iy, i]] = cv;
                eyi[[iy, i]] = sv;
            }
        }
        for (o, (cr, ci)) in out.iter_mut().zip(&halves) {
            let pr = cr.dot(&exr) - ci.dot(&exi);
            let pi = cr.dot(&exi) + ci.dot(&exr);
            for i in 0..t {
                let mut acc = 0.0;
                for iy in 0..ny {
                    acc += pr[[iy, i]] * eyr[[iy, i]] - pi[[iy, i]] * eyi[[iy, i]];
                }
                o.push(acc);
            }
        }
    }
    Ok(out)
}

/// Evaluate an annular field at (s, r) pairs: Chebyshev series in r (the
/// cosine series of the even reflection) and trigonometric series in s.
pub fn annular_interpolate(field: &AnnularField, targets: &[(f64, f64)]) -> Result<Vec<f64>> {
    let ro = field.r_outer();
    let (lo, hi) = if ro < 0.0 { (ro, 0.0) } else { (0.0, ro) };
    let tol = 1e-10 * ro.abs();
    if let Some(&(s, r)) = targets.iter().find(|(_, r)| *r < lo - tol || *r > hi + tol) {
        return Err(Error::OutsideDomain(format!("(s, r) = ({s}, {r}) outside annulus [{lo}, {hi}]")));
    }
    let (fr, fi) = field.fourier();
    let (k, nm) = fr.dim();
    let mut out = Vec::with_capacity(targets.len());
    let mut cbuf = vec![0.0; nm];
    let mut sbuf = vec![0.0; nm];
    for chunk in targets.chunks(CHUNK) {
        let t = chunk.len();
        let mut tm = Array2::zeros((t, k));
        for (i, &(_, r)) in chunk.iter().enumerate() {
            let x = field.to_x(r).clamp(-1.0, 1.0);
            chebyshev::fill_basis(x, tm.slice_mut(s![i, ..]).as_slice_mut().unwrap());
        }
        let p = tm.dot(fr);
        let q = tm.dot(fi);
        for (i, &(s, _)) in chunk.iter().enumerate() {
            fill_cis(s, &mut cbuf, &mut sbuf);
            let mut acc = 0.0;
            for m in 0..nm {
                acc += p[[i, m]] * cbuf[m] - q[[i, m]] * sbuf[m];
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// Values of an annular field at its boundary or interface edge nodes.
pub fn chebyshev_edge_interpolate(field: &AnnularField, edge: Edge) -> Vec<f64> {
    field.edge_values(edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::field::GridSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn box_grid(n: usize) -> GridSpec {
        GridSpec { x0: -1.0, y0: -1.2, h: 2.0 / n as f64, nx: n, ny: n + 2 }
    }

    #[test]
    fn band_limited_exactness() {
        let g = box_grid(16);
        let f = |x: f64, y: f64| {
            (2.0 * PI * (x - g.x0) / g.lx()).cos() + (2.0 * PI * 3.0 * (y - g.y0) / g.ly()).sin()
        };
        let field = SpectralField2D::new(g, g.sample(f));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<[f64; 2]> = (0..50)
            .map(|_| [g.x0 + rng.gen::<f64>() * g.lx(), g.y0 + rng.gen::<f64>() * g.ly()])
            .collect();
        let v = nudft2_interpolate(&field, &pts).unwrap();
        for (p, val) in pts.iter().zip(v) {
            assert!((val - f(p[0], p[1])).abs() < 1e-13);
        }
    }

    #[test]
    fn grid_nodes_reproduce_values() {
        let g = box_grid(12);
        let field = SpectralField2D::new(g, g.sample(|x, y| (x * y).sin() + x));
        let pts: Vec<[f64; 2]> = (0..g.ny).flat_map(|iy| (0..g.nx).map(move |ix| (ix, iy))).map(|(ix, iy)| g.node(ix, iy)).collect();
        let v = nudft2_interpolate(&field, &pts).unwrap();
        for (val, node) in v.iter().zip(field.values().iter()) {
            assert!((val - node).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_outside_targets() {
        let g = box_grid(8);
        let field = SpectralField2D::new(g, g.sample(|x, _| x));
        assert!(nudft2_interpolate(&field, &[[5.0, 0.0]]).is_err());
    }

    #[test]
    fn spectral_convergence_for_smooth_periodic_field() {
        let f = |x: f64, y: f64| ((PI * x).sin() * 2.0).exp() * (PI * y).cos();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<[f64; 2]> = (0..100).map(|_| [2.0 * rng.gen::<f64>(), 2.0 * rng.gen::<f64>()]).collect();
        let mut errs = vec![];
        for n in [8, 16, 32] {
            let g = GridSpec { x0: 0.0, y0: 0.0, h: 2.0 / n as f64, nx: n, ny: n };
            let v = nudft2_interpolate(&SpectralField2D::new(g, g.sample(f)), &pts).unwrap();
            errs.push(pts.iter().zip(v).map(|(p, val)| (val - f(p[0], p[1])).abs()).fold(0.0, f64::max));
        }
        assert!(errs[1] < 1e-3 * errs[0] && errs[2] < 1e-12, "{errs:?}");
    }

    fn annular_field(n: usize, m: usize, ro: f64, f: impl Fn(f64, f64) -> f64) -> AnnularField {
        let xs = chebyshev::nodes(m);
        AnnularField::from_values(
            Array2::from_shape_fn((n, m), |(j, k)| {
                let s = 2.0 * PI * j as f64 / n as f64;
                f(s, ro * (xs[k] + 1.0) / 2.0)
            }),
            ro,
        )
    }

    #[test]
    fn annular_polynomial_exactness() {
        let ro = -0.4;
        // T_3 of the scaled coordinate, s-independent
        let t3 = |r: f64| {
            let x = 2.0 * r / ro - 1.0;
            4.0 * x * x * x - 3.0 * x
        };
        let field = annular_field(10, 6, ro, |_, r| t3(r));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tg: Vec<(f64, f64)> = (0..40).map(|_| (rng.gen::<f64>() * 7.0, ro * rng.gen::<f64>())).collect();
        let v = annular_interpolate(&field, &tg).unwrap();
        for (&(_, r), val) in tg.iter().zip(v) {
            assert!((val - t3(r)).abs() < 1e-13);
        }
    }

    #[test]
    fn annular_tensor_nodes_and_edges_agree() {
        let ro = -0.3;
        let (n, m) = (12, 7);
        let field = annular_field(n, m, ro, |s, r| (2.0 * s).cos() * (1.0 + r * 3.0).exp());
        let xs = chebyshev::nodes(m);
        let tg: Vec<(f64, f64)> = (0..n)
            .flat_map(|j| (0..m).map(move |k| (j, k)))
            .map(|(j, k)| (2.0 * PI * j as f64 / n as f64, ro * (xs[k] + 1.0) / 2.0))
            .collect();
        let v = annular_interpolate(&field, &tg).unwrap();
        for (val, node) in v.iter().zip(field.values().iter()) {
            assert!((val - node).abs() < 1e-13);
        }
        for (edge, r) in [(Edge::Boundary, 0.0), (Edge::Interface, ro)] {
            let e = chebyshev_edge_interpolate(&field, edge);
            let tg: Vec<(f64, f64)> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64, r)).collect();
            let v = annular_interpolate(&field, &tg).unwrap();
            for (a, b) in e.iter().zip(v) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn annular_spectral_convergence() {
        let ro = -0.25;
        let f = |s: f64, r: f64| (3.0 * s).sin() * (4.0 * r).exp() + (s.cos()).exp();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tg: Vec<(f64, f64)> = (0..60).map(|_| (rng.gen::<f64>() * 2.0 * PI, ro * rng.gen::<f64>())).collect();
        let mut errs = vec![];
        for (n, m) in [(8, 4), (16, 8), (32, 14)] {
            let v = annular_interpolate(&annular_field(n, m, ro, f), &tg).unwrap();
            errs.push(tg.iter().zip(v).map(|(&(s, r), val)| (val - f(s, r)).abs()).fold(0.0, f64::max));
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-13, "{errs:?}");
    }

    #[test]
    fn annular_rejects_out_of_range() {
        let field = annular_field(8, 5, -0.2, |_, r| r);
        assert!(annular_interpolate(&field, &[(0.0, 0.1)]).is_err());
        assert!(annular_interpolate(&field, &[(0.0, -0.3)]).is_err());
    }
}
