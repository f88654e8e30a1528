//! Setup (everything that depends only on Ω and the parameters) and the
//! per-right-hand-side solve.

use super::params::Params;
use crate::annular::{build_preconditioner, solve_annular, AnnularOperator, CircularPreconditioner};
use crate::coupling::{
    apply_homogeneous_correction, assemble_grid, boundary_discrepancy, compute_jumps, finalize_on_grid, interface_continuity, stitch,
    InterfaceSources, JumpData, StitchDensities,
};
use crate::cutoff::{build_bump_xi, default_bump_center, eval_eta, StepFunction, StepProfile};
use crate::geometry::{build_annulus, classify_points, AnnularGrid, BoundaryCurve, Classifier, GridClassification, Label, RegularGrid, Side};
use crate::gridsolve::{enforce_mean_zero, intend, solve_regular, PdeKind};
use crate::numerics::interp::{annular_interpolate, nudft2_interpolate};
use crate::numerics::{AnnularField, SpectralField2D};
use crate::potentials::qfs::{qfs_build, qfs_layers};
use crate::potentials::{BieMode, EffectiveSource, EvalSide, HomogeneousBie, KernelSet, QfsOptions};
use crate::{Error, Result};
use ndarray::Array2;
use std::sync::Arc;
use std::time::Instant;

const ANNULAR_MAX_ITER: usize = 300;

pub struct SolverContext {
    pub params: Params,
    pub pde: PdeKind,
    pub curve: Arc<BoundaryCurve>,
    pub annulus: AnnularGrid,
    pub grid: RegularGrid,
    pub cls: GridClassification,
    pub step: Arc<StepFunction>,
    /// η on the grid [iy, ix] and on the annular nodes [j, k].
    pub eta_grid: Array2<f64>,
    pub eta_annulus: Array2<f64>,
    /// Compatibility bump, Poisson only.
    pub xi: Option<Array2<f64>>,
    pub operator: AnnularOperator,
    pub preconditioner: CircularPreconditioner,
    pub interface: InterfaceSources,
    /// Γ's representation for targets inside Ω.
    pub gamma_source: EffectiveSource,
    pub bie: HomogeneousBie,
    pub faithful_points: Vec<[f64; 2]>,
    pub t_setup: f64,
}

impl std::fmt::Debug for SolverContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverContext").field("params", &self.params).field("pde", &self.pde).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub gmres_iters_annular: usize,
    pub annular_history: Vec<f64>,
    pub bie_iters: usize,
    /// Wall-clock seconds per stage, in pipeline order.
    pub stage_times: Vec<(&'static str, f64)>,
    pub t_solve: f64,
}

pub struct Solution {
    /// u at every grid node of Ω, NaN elsewhere; [iy, ix].
    pub u_grid: Array2<f64>,
    /// u at faithful grid nodes, in `cls.faithful` order.
    pub faithful: Vec<f64>,
    /// u at Annulus-labeled grid nodes, in `cls.annulus` order.
    pub annulus_nodes: Vec<f64>,
    /// Final field on the annular tensor grid.
    pub annular: AnnularField,
    pub u_r: SpectralField2D,
    pub jumps: JumpData,
    pub densities: StitchDensities,
    /// ζ of u_H = D_Γ ζ and its effective-source density.
    pub zeta_h: Vec<f64>,
    pub zeta_h_eff: Vec<f64>,
    /// u_I on the annular nodes, kept for continuity checks.
    pub stitched_annular: AnnularField,
    pub diagnostics: Diagnostics,
}

/// Every setup product, in dependency order.
pub fn setup(curve: BoundaryCurve, params: &Params, pde: PdeKind) -> Result<SolverContext> {
    setup_with(curve, params, pde, StepProfile::Prolate, BieMode::Dense)
}

pub fn setup_with(curve: BoundaryCurve, params: &Params, pde: PdeKind, profile: StepProfile, bie_mode: BieMode) -> Result<SolverContext> {
    let t0 = Instant::now();
    if curve.len() != params.n {
        return Err(Error::Config(format!("curve has {} nodes, parameters say {}", curve.len(), params.n)));
    }
    let curve = Arc::new(curve);
    let annulus = build_annulus(curve.clone(), params.big_r, params.m, Side::Interior, params.r_max)?;
    let grid = params.grid(&curve);
    let cls = classify_points(&annulus, &grid)?;
    let step = StepFunction::cached(params.b, profile)?;
    let (eta_grid, eta_annulus) = eval_eta(&cls, &grid, &annulus, &step);
    let xi = if pde.has_nullspace() {
        let center = default_bump_center(&grid, params.bump_pad);
        Some(build_bump_xi(&grid, &cls, center, params.bump_radius, &step)?)
    } else {
        None
    };
    let kernels = KernelSet::new(pde);
    let opts = QfsOptions::default();
    let icurve = annulus.interface_curve()?;
    let ilayers = qfs_layers(&icurve, &kernels, &opts)?;
    let inner = qfs_build(&icurve, ilayers.clone(), EvalSide::Inside, kernels, &opts)?;
    let outer = qfs_build(&icurve, ilayers, EvalSide::Outside, kernels, &opts)?;
    let glayers = qfs_layers(&curve, &kernels, &opts)?;
    let gamma_source = qfs_build(&curve, glayers, EvalSide::Inside, kernels, &opts)?;
    let bie = HomogeneousBie::new(&curve, &kernels, bie_mode, params.eps)?;
    let operator = AnnularOperator::new(&annulus, pde);
    let preconditioner = build_preconditioner(&annulus, pde)?;
    let faithful_points = cls.faithful.iter().map(|&i| grid.node(i)).collect();
    Ok(SolverContext {
        params: *params,
        pde,
        curve,
        annulus,
        grid,
        cls,
        step,
        eta_grid,
        eta_annulus,
        xi,
        operator,
        preconditioner,
        interface: InterfaceSources { curve: icurve, inner, outer },
        gamma_source,
        bie,
        faithful_points,
        t_setup: t0.elapsed().as_secs_f64(),
    })
}

/// Right-hand side and boundary data sampled on the discretization: f at
/// grid nodes of Ω (zero elsewhere) and at annular nodes, g at Γ's nodes.
#[derive(Clone, Debug)]
pub struct SampledData {
    pub f_grid: Array2<f64>,
    pub f_annulus: Array2<f64>,
    pub g: Vec<f64>,
}

impl SolverContext {
    /// f is only ever evaluated inside Ω.
    pub fn sample(&self, f: &dyn Fn(f64, f64) -> f64, g: &dyn Fn(f64, f64) -> f64) -> SampledData {
        let spec = &self.grid.spec;
        let mut f_grid = Array2::zeros((spec.ny, spec.nx));
        let flat = f_grid.as_slice_mut().expect("standard layout");
        for &i in self.cls.faithful.iter().chain(&self.cls.annulus) {
            let p = self.grid.node(i);
            flat[i] = f(p[0], p[1]);
        }
        let f_annulus = self.annulus.nodes.mapv(|p| f(p[0], p[1]));
        let g = self.curve.points.iter().map(|p| g(p[0], p[1])).collect();
        SampledData { f_grid, f_annulus, g }
    }

    pub fn solve(&self, f: &dyn Fn(f64, f64) -> f64, g: &dyn Fn(f64, f64) -> f64) -> Result<Solution> {
        self.solve_sampled(&self.sample(f, g))
    }

    pub fn solve_sampled(&self, data: &SampledData) -> Result<Solution> {
        let t0 = Instant::now();
        let mut times = Vec::new();
        let mut lap = |name: &'static str, t: &mut Instant| {
            times.push((name, t.elapsed().as_secs_f64()));
            *t = Instant::now();
        };
        let mut t = Instant::now();
        let h = self.grid.h();
        let mut f_i = intend(&data.f_grid, &self.eta_grid);
        if let Some(xi) = &self.xi {
            f_i = enforce_mean_zero(&f_i, xi, h);
        }
        lap("intend", &mut t);
        let u_r = solve_regular(&SpectralField2D::new(self.grid.spec, f_i), self.pde)?;
        lap("regular", &mut t);
        let ua = solve_annular(&self.annulus, &self.operator, &self.preconditioner, &data.f_annulus, self.params.eps, ANNULAR_MAX_ITER)?;
        lap("annular", &mut t);
        let jumps = compute_jumps(&u_r, &ua.field, &self.interface.curve)?;
        lap("jumps", &mut t);
        let ur_vals = u_r.values().as_slice().expect("standard layout");
        let ur_faithful: Vec<f64> = self.cls.faithful.iter().map(|&i| ur_vals[i]).collect();
        let stitched = stitch(&ua.field, &jumps, &self.interface, &self.annulus, &self.faithful_points, &ur_faithful);
        lap("stitch", &mut t);
        let disc = boundary_discrepancy(&stitched, &data.g);
        let (zeta_h, bie_iters) = self.bie.solve(&disc)?;
        lap("bie", &mut t);
        let corrected = apply_homogeneous_correction(&stitched, &zeta_h, &self.gamma_source, &self.annulus, &self.faithful_points);
        lap("correct", &mut t);
        let annulus_nodes = finalize_on_grid(&corrected.annular, &self.cls)?;
        let spec = &self.grid.spec;
        let u_grid = assemble_grid((spec.ny, spec.nx), &self.cls, &corrected.faithful, &annulus_nodes);
        lap("finalize", &mut t);
        Ok(Solution {
            u_grid,
            faithful: corrected.faithful,
            annulus_nodes,
            annular: corrected.annular,
            u_r,
            jumps,
            densities: stitched.densities,
            zeta_h,
            zeta_h_eff: corrected.zeta_h_eff,
            stitched_annular: stitched.annular,
            diagnostics: Diagnostics {
                gmres_iters_annular: ua.iterations,
                annular_history: ua.history,
                bie_iters,
                stage_times: times,
                t_solve: t0.elapsed().as_secs_f64(),
            },
        })
    }

    /// u at arbitrary points of Ω.
    pub fn evaluate(&self, sol: &Solution, points: &[[f64; 2]]) -> Result<Vec<f64>> {
        let classifier = Classifier::new(&self.annulus)?;
        let mut faithful = Vec::new();
        let mut annular = Vec::new();
        let mut slots = Vec::with_capacity(points.len());
        for p in points {
            match classifier.classify(*p)? {
                (Label::Faithful, _) => {
                    slots.push((true, faithful.len()));
                    faithful.push(*p);
                }
                (Label::Annulus, Some(sr)) => {
                    slots.push((false, annular.len()));
                    annular.push(sr);
                }
                _ => return Err(Error::OutsideDomain(format!("({}, {}) is not in Ω", p[0], p[1]))),
            }
        }
        let mut fv = nudft2_interpolate(&sol.u_r, &faithful)?;
        let c1 = self.interface.inner.eval(&sol.densities.zeta_in, &faithful);
        let c2 = self.gamma_source.eval(&sol.zeta_h_eff, &faithful);
        for i in 0..fv.len() {
            fv[i] += c1[i] + c2[i];
        }
        let av = annular_interpolate(&sol.annular, &annular)?;
        Ok(slots.into_iter().map(|(f, i)| if f { fv[i] } else { av[i] }).collect())
    }

    /// Value and normal-derivative mismatch of u_I across the interface at
    /// midpoints between interface nodes.
    pub fn interface_continuity(&self, sol: &Solution) -> Result<(f64, f64)> {
        interface_continuity(&sol.u_r, &self.interface, &sol.densities.zeta_in, &sol.stitched_annular)
    }
}
