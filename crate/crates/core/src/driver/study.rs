//! One manufactured solve end to end, and refinement sweeps built from it.

use super::config::{RunConfig, StudySpec};
use super::metrics::{error_report, ErrorMetrics};
use super::output::{write_curve, write_field, write_jumps, write_mask, write_residuals, write_results, ResultRow};
use super::params::{fixed_m_parameters, proportional_m_parameters, select_parameters, Overrides, Params};
use super::pipeline::{setup, Solution, SolverContext};
use super::problems::{CurveSpec, Manufactured, ProblemId};
use crate::geometry::BoundaryCurve;
use crate::gridsolve::PdeKind;
use crate::{Error, Result};
use std::path::Path;

/// How the discretization of one run is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Refinement {
    Policy { h: f64 },
    FixedM { n: usize, m: usize },
    ProportionalM { n: usize, gamma: f64 },
}

pub fn choose(curve: &CurveSpec, pde: PdeKind, how: Refinement, ov: &Overrides) -> Result<(Params, BoundaryCurve)> {
    let p = curve.parametrization();
    match how {
        Refinement::Policy { h } => select_parameters(p.as_ref(), h, pde, ov),
        Refinement::FixedM { n, m } => fixed_m_parameters(p.as_ref(), n, m, pde, ov),
        Refinement::ProportionalM { n, gamma } => proportional_m_parameters(p.as_ref(), n, gamma, pde, ov),
    }
}

pub struct RunOutcome {
    pub ctx: SolverContext,
    pub solution: Solution,
    pub metrics: ErrorMetrics,
    pub row: ResultRow,
}

pub fn run_manufactured(curve: &CurveSpec, pde: PdeKind, problem: ProblemId, how: Refinement, ov: &Overrides) -> Result<RunOutcome> {
    let (params, bc) = choose(curve, pde, how, ov)?;
    let ctx = setup(bc, &params, pde)?;
    let mf = Manufactured::new(problem, pde);
    let solution = ctx.solve(&|x, y| mf.f(x, y), &|x, y| mf.u(x, y))?;
    let metrics = error_report(&ctx, &solution, &|x, y| mf.u(x, y));
    let row = ResultRow {
        h: params.h,
        n: params.n,
        m: params.m,
        nx: params.nx,
        ny: params.ny,
        big_r: params.big_r,
        b: params.b,
        err_linf: metrics.linf,
        err_l2_rel: metrics.l2_rel,
        gmres_iters_annular: solution.diagnostics.gmres_iters_annular,
        bie_iters: solution.diagnostics.bie_iters,
        t_setup_s: ctx.t_setup,
        t_solve_s: solution.diagnostics.t_solve,
    };
    Ok(RunOutcome { ctx, solution, metrics, row })
}

/// The refinements a configuration asks for.
pub fn refinements(cfg: &RunConfig) -> Vec<Refinement> {
    match &cfg.study {
        Some(StudySpec::FixedM { m, n_list }) => n_list.iter().map(|&n| Refinement::FixedM { n, m: *m }).collect(),
        Some(StudySpec::ProportionalM { gamma, n_list }) => {
            n_list.iter().map(|&n| Refinement::ProportionalM { n, gamma: *gamma }).collect()
        }
        None => cfg.hs().into_iter().map(|h| Refinement::Policy { h }).collect(),
    }
}

/// Write the dumps of one run into `dir`: u.fld, err.fld, mask.bin,
/// jumps.csv, residuals.csv and the curve traces boundary.csv and
/// interface.csv.
pub fn write_run_files(dir: &Path, out: &RunOutcome, problem: ProblemId) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let g = &out.ctx.grid.spec;
    write_field(&dir.join("u.fld"), g, &out.solution.u_grid)?;
    let mf = Manufactured::new(problem, out.ctx.pde);
    let mut err = out.solution.u_grid.clone();
    for ((iy, ix), v) in err.indexed_iter_mut() {
        if v.is_finite() {
            let p = g.node(ix, iy);
            *v = (*v - mf.u(p[0], p[1])).abs();
        }
    }
    write_field(&dir.join("err.fld"), g, &err)?;
    write_mask(&dir.join("mask.bin"), g, &out.ctx.cls)?;
    write_jumps(&dir.join("jumps.csv"), &out.ctx, &out.solution.jumps)?;
    write_residuals(&dir.join("residuals.csv"), &out.ctx, &out.solution)?;
    write_curve(&dir.join("boundary.csv"), &out.ctx.curve)?;
    write_curve(&dir.join("interface.csv"), &out.ctx.interface.curve)?;
    Ok(())
}

/// Run every refinement of `cfg`, writing results.csv and per-run dumps
/// under `output_dir`. Rejected discretizations are reported and skipped;
/// the first other error aborts the sweep.
pub fn run_config(cfg: &RunConfig, dumps: bool, mut log: impl FnMut(&str)) -> Result<Vec<ResultRow>> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    let pde = PdeKind::from(cfg.pde);
    let mut rows = Vec::new();
    for (i, how) in refinements(cfg).into_iter().enumerate() {
        match run_manufactured(&cfg.curve, pde, cfg.problem, how, &cfg.overrides) {
            Ok(out) => {
                log(&format!(
                    "{how:?}: N={} M={} err_linf={:.3e} iters={}",
                    out.row.n, out.row.m, out.row.err_linf, out.row.gmres_iters_annular
                ));
                if dumps {
                    write_run_files(&cfg.output_dir.join(format!("run{i:03}")), &out, cfg.problem)?;
                }
                rows.push(out.row);
            }
            Err(Error::Rejected(msg)) => log(&format!("{how:?}: rejected ({msg})")),
            Err(e) => return Err(e),
        }
    }
    write_results(&cfg.output_dir.join("results.csv"), &rows)?;
    Ok(rows)
}
