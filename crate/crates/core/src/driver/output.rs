//! Files written by the front end: results.csv, field and mask dumps,
//! jumps.csv and GMRES residual histories.
//!
//! Field dump: the 8 bytes `IFLD0001`, then little-endian u32 N_x, u32 N_y,
//! f64 x0, f64 y0, f64 h, then N_x·N_y f64 values row-major with y the
//! slow index (row iy holds the nodes (x0 + ix h, y0 + iy h)). Nodes outside
//! Ω hold NaN. The mask dump has the same layout with magic `IMSK0001` and
//! one u8 label per node: 0 exterior, 1 annulus, 2 faithful.

use super::pipeline::{Solution, SolverContext};
use crate::coupling::JumpData;
use crate::geometry::{BoundaryCurve, GridClassification};
use crate::numerics::GridSpec;
use crate::{Error, Result};
use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

pub const FIELD_MAGIC: &[u8; 8] = b"IFLD0001";
pub const MASK_MAGIC: &[u8; 8] = b"IMSK0001";

pub const RESULTS_HEADER: [&str; 13] =
    ["h", "N", "M", "Nx", "Ny", "R", "b", "err_linf", "err_l2_rel", "gmres_iters_annular", "bie_iters", "t_setup_s", "t_solve_s"];

/// One row of results.csv; field names are the column names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub h: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Nx")]
    pub nx: usize,
    #[serde(rename = "Ny")]
    pub ny: usize,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub b: u32,
    pub err_linf: f64,
    pub err_l2_rel: f64,
    pub gmres_iters_annular: usize,
    pub bie_iters: usize,
    pub t_setup_s: f64,
    pub t_solve_s: f64,
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    if rows.is_empty() {
        w.write_record(RESULTS_HEADER).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn header(out: &mut impl Write, magic: &[u8; 8], g: &GridSpec) -> Result<()> {
    out.write_all(magic)?;
    out.write_all(&(g.nx as u32).to_le_bytes())?;
    out.write_all(&(g.ny as u32).to_le_bytes())?;
    for v in [g.x0, g.y0, g.h] {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_field(path: &Path, g: &GridSpec, values: &Array2<f64>) -> Result<()> {
    assert_eq!(values.dim(), (g.ny, g.nx));
    let mut out = BufWriter::new(File::create(path)?);
    header(&mut out, FIELD_MAGIC, g)?;
    for v in values.iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_mask(path: &Path, g: &GridSpec, cls: &GridClassification) -> Result<()> {
    let bytes: Vec<u8> = cls.labels.iter().map(|&l| l as u8).collect();
    write_mask_labels(path, g, &Array2::from_shape_vec((g.ny, g.nx), bytes).expect("one label per node"))
}

pub fn write_mask_labels(path: &Path, g: &GridSpec, labels: &Array2<u8>) -> Result<()> {
    assert_eq!(labels.dim(), (g.ny, g.nx));
    let mut out = BufWriter::new(File::create(path)?);
    header(&mut out, MASK_MAGIC, g)?;
    out.write_all(&labels.iter().copied().collect::<Vec<u8>>())?;
    out.flush()?;
    Ok(())
}

fn read_header(buf: &[u8], magic: &[u8; 8]) -> Result<(GridSpec, usize)> {
    if buf.len() < 40 || &buf[..8] != magic {
        return Err(Error::Config(format!("not a {} file", String::from_utf8_lossy(magic))));
    }
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    Ok((GridSpec { nx: u32_at(8), ny: u32_at(12), x0: f64_at(16), y0: f64_at(24), h: f64_at(32) }, 40))
}

pub fn read_field(path: &Path) -> Result<(GridSpec, Array2<f64>)> {
    let mut buf = Vec::new();
    File::open(path)?.read_to_end(&mut buf)?;
    let (g, off) = read_header(&buf, FIELD_MAGIC)?;
    let n = g.nx * g.ny;
    if buf.len() != off + 8 * n {
        return Err(Error::Config(format!("field dump has {} bytes, expected {}", buf.len(), off + 8 * n)));
    }
    let v: Vec<f64> = buf[off..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((g, Array2::from_shape_vec((g.ny, g.nx), v).expect("shape")))
}

pub fn read_mask(path: &Path) -> Result<(GridSpec, Array2<u8>)> {
    let mut buf = Vec::new();
    File::open(path)?.read_to_end(&mut buf)?;
    let (g, off) = read_header(&buf, MASK_MAGIC)?;
    if buf.len() != off + g.nx * g.ny {
        return Err(Error::Config("mask dump has the wrong length".into()));
    }
    Ok((g, Array2::from_shape_vec((g.ny, g.nx), buf[off..].to_vec()).expect("shape")))
}

/// One row of jumps.csv: interface node j at parameter s and position
/// (x, y) with the jumps γ = u_r − u_a and σ = ∂u_r/∂n − ∂u_a/∂r.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpRow {
    pub j: usize,
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub gamma: f64,
    pub sigma: f64,
}

pub const JUMPS_HEADER: [&str; 6] = ["j", "s", "x", "y", "gamma", "sigma"];

pub fn write_jumps(path: &Path, ctx: &SolverContext, jumps: &JumpData) -> Result<()> {
    let c = &ctx.interface.curve;
    let rows: Vec<JumpRow> = (0..c.len())
        .map(|j| JumpRow { j, s: c.s(j), x: c.points[j][0], y: c.points[j][1], gamma: jumps.gamma[j], sigma: jumps.sigma[j] })
        .collect();
    write_jump_rows(path, &rows)
}

/// Floats are written with 18 significant digits, which reproduces every
/// f64 exactly and reformats to the same text.
pub fn write_jump_rows(path: &Path, rows: &[JumpRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(JUMPS_HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.j.to_string()];
        rec.extend([r.s, r.x, r.y, r.gamma, r.sigma].iter().map(|v| format!("{v:.17e}")));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jumps(path: &Path) -> Result<Vec<JumpRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    if r.headers().map_err(csv_err)? != JUMPS_HEADER.as_slice() {
        return Err(Error::Config(format!("{} does not have the jumps.csv header", path.display())));
    }
    let bad = |what: &str| Error::Config(format!("jumps.csv: bad {what}"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let f = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(JUMPS_HEADER[i]));
        rows.push(JumpRow { j: rec[0].parse().map_err(|_| bad("j"))?, s: f(1)?, x: f(2)?, y: f(3)?, gamma: f(4)?, sigma: f(5)? });
    }
    Ok(rows)
}

/// Curve trace for plotting: node index, parameter, position, outward normal.
pub fn write_curve(path: &Path, curve: &BoundaryCurve) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["j", "s", "x", "y", "nx", "ny"]).map_err(csv_err)?;
    for j in 0..curve.len() {
        let (p, n) = (curve.points[j], curve.normals[j]);
        w.write_record([j.to_string(), format!("{:.17e}", curve.s(j))].into_iter().chain([p[0], p[1], n[0], n[1]].iter().map(|v| format!("{v:.17e}"))))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// residuals.csv: annular GMRES residual history plus the final continuity
/// and boundary-trace checks of one solve.
pub fn write_residuals(path: &Path, ctx: &SolverContext, sol: &Solution) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["quantity", "index", "value"]).map_err(csv_err)?;
    for (i, r) in sol.diagnostics.annular_history.iter().enumerate() {
        w.write_record(["annular_gmres_residual", &i.to_string(), &format!("{r:.6e}")]).map_err(csv_err)?;
    }
    let (cv, cd) = ctx.interface_continuity(sol)?;
    w.write_record(["interface_value_jump", "0", &format!("{cv:.6e}")]).map_err(csv_err)?;
    w.write_record(["interface_flux_jump", "0", &format!("{cd:.6e}")]).map_err(csv_err)?;
    for (name, t) in &sol.diagnostics.stage_times {
        w.write_record(["stage_seconds", name, &format!("{t:.6e}")]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
