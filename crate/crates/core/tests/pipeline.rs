use intension::driver::output::{read_field, read_jumps, read_mask, read_results};
use intension::driver::study::write_run_files;
use intension::driver::{
    error_report, run_config, run_manufactured, select_parameters, setup, CurveSpec, Manufactured, Overrides, ProblemId,
    Refinement, RunConfig,
};
use intension::geometry::Label;
use intension::{Error, PdeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn star() -> CurveSpec {
    CurveSpec::default()
}

#[test]
fn circle_poisson() {
    let c = CurveSpec::Circle { center: [0.2, -0.1], radius: 1.0 };
    let out = run_manufactured(&c, PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.03 }, &Overrides::default()).unwrap();
    assert!(out.metrics.linf < 1e-6, "{}", out.metrics.linf);
    assert!(out.row.gmres_iters_annular <= 2);
}

#[test]
fn one_setup_serves_several_right_hand_sides() {
    let pde = PdeKind::ModifiedHelmholtz { alpha: 2.0 };
    let (params, curve) = select_parameters(star().parametrization().as_ref(), 0.025, pde, &Overrides::default()).unwrap();
    let ctx = setup(curve, &params, pde).unwrap();
    for problem in [ProblemId::StarPoisson, ProblemId::Homogeneous, ProblemId::StarPoisson] {
        let mf = Manufactured::new(problem, pde);
        let sol = ctx.solve(&|x, y| mf.f(x, y), &|x, y| mf.u(x, y)).unwrap();
        let fresh = run_manufactured(&star(), pde, problem, Refinement::Policy { h: 0.025 }, &Overrides::default()).unwrap();
        let e = error_report(&ctx, &sol, &|x, y| mf.u(x, y)).linf;
        assert!(e < 1e-5, "{problem:?}: {e}");
        assert!((e - fresh.metrics.linf).abs() <= 1e-3 * e, "{problem:?}: {e} vs {}", fresh.metrics.linf);
    }
}

#[test]
fn oversized_annulus_is_rejected() {
    let ov = Overrides { big_r: Some(5.0), ..Default::default() };
    let r = run_manufactured(&star(), PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.05 }, &ov);
    match r {
        Err(e @ Error::Rejected(_)) => assert_eq!(e.exit_code(), 2),
        Err(e) => panic!("wrong error {e}"),
        Ok(_) => panic!("accepted R = 5"),
    }
}

#[test]
fn homogeneous_problem_is_accurate() {
    for pde in [PdeKind::Poisson, PdeKind::ModifiedHelmholtz { alpha: 5.0 }] {
        let out = run_manufactured(&star(), pde, ProblemId::Homogeneous, Refinement::Policy { h: 0.02 }, &Overrides::default()).unwrap();
        assert!(out.metrics.linf < 1e-8, "{}: {}", pde.name(), out.metrics.linf);
    }
}

#[test]
fn evaluation_off_the_grid() {
    let pde = PdeKind::Poisson;
    let out = run_manufactured(&star(), pde, ProblemId::StarPoisson, Refinement::Policy { h: 0.02 }, &Overrides::default()).unwrap();
    let mf = Manufactured::new(ProblemId::StarPoisson, pde);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // star radius 1 + 0.15 cos 5θ; sample up to just inside Γ
    let pts: Vec<[f64; 2]> = (0..500)
        .map(|_| {
            let t = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 + 0.15 * (5.0 * t).cos()) * rng.gen_range(0.0f64..0.999).sqrt();
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    let v = out.ctx.evaluate(&out.solution, &pts).unwrap();
    let worst = pts.iter().zip(&v).map(|(p, v)| (v - mf.u(p[0], p[1])).abs()).fold(0.0, f64::max);
    assert!(worst <= 10.0 * out.metrics.linf + 1e-12, "{worst} vs node error {}", out.metrics.linf);
    assert!(matches!(out.ctx.evaluate(&out.solution, &[[3.0, 0.0]]), Err(Error::OutsideDomain(_))));
}

#[test]
fn error_report_measures_a_known_shift() {
    let out = run_manufactured(&star(), PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.03 }, &Overrides::default()).unwrap();
    let mf = Manufactured::new(ProblemId::StarPoisson, PdeKind::Poisson);
    let same = error_report(&out.ctx, &out.solution, &|x, y| mf.u(x, y));
    assert_eq!(same.linf, out.metrics.linf);
    let shifted = error_report(&out.ctx, &out.solution, &|x, y| mf.u(x, y) + 0.25);
    assert!((shifted.linf - 0.25).abs() <= out.metrics.linf);
    assert!(same.linf_faithful.max(same.linf_annulus_grid).max(same.linf_annular) == same.linf);
}

#[test]
fn solution_is_continuous_across_the_interface() {
    let out = run_manufactured(&star(), PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.02 }, &Overrides::default()).unwrap();
    let (value, flux) = out.ctx.interface_continuity(&out.solution).unwrap();
    assert!(value < 1e-6 && flux < 1e-4, "{value} {flux}");
}

#[test]
fn run_files_are_consistent() {
    let out = run_manufactured(&star(), PdeKind::Poisson, ProblemId::StarPoisson, Refinement::Policy { h: 0.05 }, &Overrides::default()).unwrap();
    let dir = std::env::temp_dir().join(format!("intension-run-{}", std::process::id()));
    write_run_files(&dir, &out, ProblemId::StarPoisson).unwrap();
    let (g, u) = read_field(&dir.join("u.fld")).unwrap();
    let (g2, mask) = read_mask(&dir.join("mask.bin")).unwrap();
    let (_, err) = read_field(&dir.join("err.fld")).unwrap();
    assert_eq!(g, out.ctx.grid.spec);
    assert_eq!(g, g2);
    for ((m, v), e) in mask.iter().zip(u.iter()).zip(err.iter()) {
        assert_eq!(*m == Label::Exterior as u8, v.is_nan());
        assert!(e.is_nan() || *e <= out.metrics.linf);
    }
    assert_eq!(mask.iter().filter(|&&m| m == Label::Faithful as u8).count(), out.ctx.cls.count(Label::Faithful));
    let jumps = read_jumps(&dir.join("jumps.csv")).unwrap();
    assert_eq!(jumps.len(), out.ctx.params.n);
    for (r, g) in jumps.iter().zip(&out.solution.jumps.gamma) {
        assert_eq!(r.gamma, *g);
    }
    for name in ["residuals.csv", "boundary.csv", "interface.csv"] {
        assert!(dir.join(name).exists(), "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_from_a_config() {
    let dir = std::env::temp_dir().join(format!("intension-sweep-{}", std::process::id()));
    let text = format!(
        "problem = \"star_poisson\"\nh_list = [0.06, 0.04]\noutput_dir = {:?}\n[pde]\ntype = \"poisson\"\n",
        dir.display().to_string()
    );
    let cfg = RunConfig::from_toml(&text).unwrap();
    let mut lines = Vec::new();
    let rows = run_config(&cfg, true, |l| lines.push(l.to_string())).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].err_linf < rows[0].err_linf);
    assert_eq!(read_results(&dir.join("results.csv")).unwrap(), rows);
    assert!(dir.join("run001/u.fld").exists());
    assert_eq!(lines.len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
