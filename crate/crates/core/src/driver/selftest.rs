//! Quick invariant checks behind the `selftest` command.

use super::params::{select_parameters, Overrides};
use super::pipeline::setup;
use super::problems::{Manufactured, ProblemId};
use super::study::{run_manufactured, Refinement};
use super::CurveSpec;
use crate::geometry::{point_in_polygon, BoundaryCurve, Label, Star};
use crate::gridsolve::PdeKind;
use crate::potentials::qfs::eval_layers_direct;
use crate::potentials::{singular_selfeval, BieMode, HomogeneousBie, KernelSet, LayerKind};
use crate::Result;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check { name, passed: value <= limit, detail: format!("{value:.3e} (limit {limit:.0e})") }
}

fn gauss() -> Result<Check> {
    let n = 256;
    let curve = BoundaryCurve::from_parametrization(&Star::default(), n)?;
    let k = KernelSet::new(PdeKind::Poisson);
    let ones = vec![1.0; n];
    let on = singular_selfeval(&curve, &ones, LayerKind::Double, &k)?;
    let mut err = on.iter().map(|v| (v + 0.5).abs()).fold(0.0, f64::max);
    // γ = 1 enters as −D: 1 inside, 0 outside
    let v = eval_layers_direct(&curve, &k, None, &ones, &[[0.1, -0.05], [3.0, 1.0]]);
    err = err.max((v[0] - 1.0).abs()).max(v[1].abs());
    Ok(check("gauss identities", err, 1e-11))
}

fn bie_constant() -> Result<Check> {
    let n = 256;
    let curve = BoundaryCurve::from_parametrization(&Star::default(), n)?;
    let bie = HomogeneousBie::new(&curve, &KernelSet::new(PdeKind::Poisson), BieMode::Dense, 1e-14)?;
    let (zeta, _) = bie.solve(&vec![1.0; n])?;
    Ok(check("constant Dirichlet BIE", zeta.iter().map(|z| (z + 1.0).abs()).fold(0.0, f64::max), 1e-12))
}

fn classification() -> Result<Check> {
    let spec = CurveSpec::default();
    let (params, curve) = select_parameters(spec.parametrization().as_ref(), 0.05, PdeKind::Poisson, &Overrides::default())?;
    let ctx = setup(curve, &params, PdeKind::Poisson)?;
    let dense: Vec<[f64; 2]> = (0..8000).map(|i| ctx.curve.point_at(2.0 * PI * i as f64 / 8000.0)).collect();
    let mut bad = 0usize;
    for (idx, &label) in ctx.cls.labels.iter().enumerate() {
        let p = ctx.grid.node(idx);
        let dist = dense.iter().map(|q| (q[0] - p[0]).hypot(q[1] - p[1])).fold(f64::INFINITY, f64::min);
        let expect = if !point_in_polygon(&dense, p) {
            Label::Exterior
        } else if dist < params.big_r {
            Label::Annulus
        } else {
            Label::Faithful
        };
        if label != expect && (dist - params.big_r).abs() > 1e-3 && dist > 1e-3 {
            bad += 1;
        }
    }
    Ok(check("classification vs brute force", bad as f64, 0.0))
}

fn circle_iterations() -> Result<Check> {
    let curve = CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0 };
    let out = run_manufactured(&curve, PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.05 }, &Overrides::default())?;
    Ok(check("circle annular GMRES iterations", out.row.gmres_iters_annular as f64, 2.0))
}

fn star_accuracy() -> Result<Check> {
    let out = run_manufactured(&CurveSpec::default(), PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.02 }, &Overrides::default())?;
    Ok(check("star Poisson error at h = 0.02", out.metrics.linf, 1e-6))
}

fn linearity() -> Result<Check> {
    let pde = PdeKind::ModifiedHelmholtz { alpha: 3.0 };
    let spec = CurveSpec::default();
    let (params, curve) = select_parameters(spec.parametrization().as_ref(), 0.03, pde, &Overrides::default())?;
    let ctx = setup(curve, &params, pde)?;
    let a = Manufactured::new(ProblemId::StarPoisson, pde);
    let b = Manufactured::new(ProblemId::RadialCosine, pde);
    let sa = ctx.solve(&|x, y| a.f(x, y), &|x, y| a.u(x, y))?;
    let sb = ctx.solve(&|x, y| b.f(x, y), &|x, y| b.u(x, y))?;
    let sc = ctx.solve(&|x, y| a.f(x, y) - 2.5 * b.f(x, y), &|x, y| a.u(x, y) - 2.5 * b.u(x, y))?;
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for ((u, v), w) in sa.faithful.iter().zip(&sb.faithful).zip(&sc.faithful) {
        err = err.max((u - 2.5 * v - w).abs());
        scale = scale.max(w.abs());
    }
    for ((u, v), w) in sa.annular.values().iter().zip(sb.annular.values().iter()).zip(sc.annular.values().iter()) {
        err = err.max((u - 2.5 * v - w).abs());
    }
    Ok(check("pipeline linearity (relative)", err / scale, 1e-11))
}

/// Run every check; a check whose setup fails is reported as failed.
pub fn run_selftest(mut log: impl FnMut(&Check)) -> Vec<Check> {
    let suites: [(&'static str, fn() -> Result<Check>); 6] = [
        ("gauss identities", gauss),
        ("constant Dirichlet BIE", bie_constant),
        ("classification vs brute force", classification),
        ("circle annular GMRES iterations", circle_iterations),
        ("star Poisson error at h = 0.02", star_accuracy),
        ("pipeline linearity (relative)", linearity),
    ];
    suites
        .into_iter()
        .map(|(name, f)| {
            let c = f().unwrap_or_else(|e| Check { name, passed: false, detail: e.to_string() });
            log(&c);
            c
        })
        .collect()
}
