use clap::{Parser, Subcommand};
use intension::driver::output::{write_curve, write_mask, write_results};
use intension::driver::study::{choose, refinements, write_run_files};
use intension::driver::{run_config, run_manufactured, run_selftest, Refinement, RunConfig};
use intension::geometry::{build_annulus, classify_points, Label, Side};
use intension::{Error, PdeKind};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "intension", version, about = "Embedded-boundary Poisson and modified Helmholtz solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one manufactured problem and write results.csv plus field dumps.
    Solve {
        config: PathBuf,
        /// Use this h instead of the first one in the config.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        no_dumps: bool,
    },
    /// Run every refinement of the config and write results.csv.
    Converge {
        config: PathBuf,
        /// Also write per-run field dumps.
        #[arg(long)]
        dumps: bool,
    },
    /// Run the built-in invariant checks.
    Selftest,
    /// Write the grid classification (mask.bin) and curve traces.
    Classify {
        config: PathBuf,
        #[arg(long)]
        h: Option<f64>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn first_refinement(cfg: &RunConfig, h: Option<f64>) -> Result<Refinement, Error> {
    match h {
        Some(h) => Ok(Refinement::Policy { h }),
        None => refinements(cfg).into_iter().next().ok_or_else(|| Error::Config("no refinement configured".into())),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve { config, h, no_dumps } => {
            let cfg = RunConfig::load(&config)?;
            let how = first_refinement(&cfg, h)?;
            let out = run_manufactured(&cfg.curve, cfg.pde.into(), cfg.problem, how, &cfg.overrides)?;
            std::fs::create_dir_all(&cfg.output_dir)?;
            write_results(&cfg.output_dir.join("results.csv"), std::slice::from_ref(&out.row))?;
            if !no_dumps {
                write_run_files(&cfg.output_dir, &out, cfg.problem)?;
            }
            let r = &out.row;
            println!(
                "N={} M={} Nx={} Ny={} R={:.4} b={}  err_linf={:.3e} err_l2_rel={:.3e}  gmres={}  setup {:.2}s solve {:.2}s",
                r.n, r.m, r.nx, r.ny, r.big_r, r.b, r.err_linf, r.err_l2_rel, r.gmres_iters_annular, r.t_setup_s, r.t_solve_s
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge { config, dumps } => {
            let cfg = RunConfig::load(&config)?;
            let rows = run_config(&cfg, dumps, |line| println!("{line}"))?;
            println!("{} rows written to {}", rows.len(), cfg.output_dir.join("results.csv").display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let checks = run_selftest(|c| println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Classify { config, h } => {
            let cfg = RunConfig::load(&config)?;
            let pde: PdeKind = cfg.pde.into();
            let (params, curve) = choose(&cfg.curve, pde, first_refinement(&cfg, h)?, &cfg.overrides)?;
            let curve = Arc::new(curve);
            let annulus = build_annulus(curve.clone(), params.big_r, params.m, Side::Interior, params.r_max)?;
            let grid = params.grid(&curve);
            let cls = classify_points(&annulus, &grid)?;
            std::fs::create_dir_all(&cfg.output_dir)?;
            write_mask(&cfg.output_dir.join("mask.bin"), &grid.spec, &cls)?;
            write_curve(&cfg.output_dir.join("boundary.csv"), &curve)?;
            write_curve(&cfg.output_dir.join("interface.csv"), &annulus.interface_curve()?)?;
            println!(
                "{}x{} grid: {} exterior, {} annulus, {} faithful ({} by coordinate inversion)",
                grid.spec.nx,
                grid.spec.ny,
                cls.count(Label::Exterior),
                cls.count(Label::Annulus),
                cls.count(Label::Faithful),
                cls.newton_count
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
