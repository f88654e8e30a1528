//! Error norms over every stored node of Ω.

use super::pipeline::{Solution, SolverContext};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorMetrics {
    pub linf: f64,
    pub linf_rel: f64,
    pub l2: f64,
    pub l2_rel: f64,
    /// Largest error on faithful grid nodes, Annulus-labeled grid nodes and
    /// annular tensor nodes separately.
    pub linf_faithful: f64,
    pub linf_annulus_grid: f64,
    pub linf_annular: f64,
}

/// Fejér first-rule weights for the m first-kind Chebyshev nodes on [−1, 1].
pub fn fejer_weights(m: usize) -> Vec<f64> {
    (0..m)
        .map(|k| {
            let th = PI * (2 * k + 1) as f64 / (2 * m) as f64;
            let s: f64 = (1..=m / 2).map(|j| (2.0 * j as f64 * th).cos() / (4.0 * (j * j) as f64 - 1.0)).sum();
            2.0 / m as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

/// L∞ over faithful grid nodes, Annulus-labeled grid nodes and annular
/// tensor nodes; L² with weight h² on faithful nodes and ψ-weighted
/// trapezoid × Fejér quadrature on the annulus.
pub fn error_report(ctx: &SolverContext, sol: &Solution, reference: &dyn Fn(f64, f64) -> f64) -> ErrorMetrics {
    let h2 = ctx.grid.h() * ctx.grid.h();
    let mut m = ErrorMetrics::default();
    let mut umax: f64 = 0.0;
    let (mut e2, mut u2) = (0.0, 0.0);
    for (&i, &v) in ctx.cls.faithful.iter().zip(&sol.faithful) {
        let p = ctx.grid.node(i);
        let u = reference(p[0], p[1]);
        let e = (v - u).abs();
        m.linf_faithful = m.linf_faithful.max(e);
        umax = umax.max(u.abs());
        e2 += e * e * h2;
        u2 += u * u * h2;
    }
    for (&i, &v) in ctx.cls.annulus.iter().zip(&sol.annulus_nodes) {
        let p = ctx.grid.node(i);
        let u = reference(p[0], p[1]);
        m.linf_annulus_grid = m.linf_annulus_grid.max((v - u).abs());
        umax = umax.max(u.abs());
    }
    let a = &ctx.annulus;
    let wr: Vec<f64> = fejer_weights(a.m).into_iter().map(|w| w * a.big_r / 2.0).collect();
    let ws = 2.0 * PI / a.n() as f64;
    let vals = sol.annular.values();
    for j in 0..a.n() {
        for k in 0..a.m {
            let p = a.nodes[[j, k]];
            let u = reference(p[0], p[1]);
            let e = (vals[[j, k]] - u).abs();
            m.linf_annular = m.linf_annular.max(e);
            umax = umax.max(u.abs());
            let w = ws * wr[k] * a.psi[[j, k]];
            e2 += e * e * w;
            u2 += u * u * w;
        }
    }
    m.linf = m.linf_faithful.max(m.linf_annulus_grid).max(m.linf_annular);
    m.linf_rel = if umax > 0.0 { m.linf / umax } else { m.linf };
    m.l2 = e2.sqrt();
    m.l2_rel = if u2 > 0.0 { (e2 / u2).sqrt() } else { m.l2 };
    m
}
