//! The files in tests/golden were produced by an independent script from the
//! documented formats. Reading them and writing the result back must give
//! the same bytes.

use intension::driver::output::{
    read_field, read_jumps, read_mask, read_results, write_field, write_jump_rows, write_mask_labels, write_results,
};
use intension::numerics::GridSpec;
use std::path::{Path, PathBuf};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("intension-golden-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn same_bytes(a: &Path, b: &Path) {
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{} differs from {}", a.display(), b.display());
}

const GRID: GridSpec = GridSpec { x0: -1.25, y0: -0.5, h: 0.25, nx: 5, ny: 4 };

#[test]
fn field_dump() {
    let (g, v) = read_field(&golden("u.fld")).unwrap();
    assert_eq!(g, GRID);
    // exterior nodes are NaN, the others (ix + 10 iy)/8 − 1
    for ((iy, ix), x) in v.indexed_iter() {
        if ix == 0 || iy == 3 {
            assert!(x.is_nan());
        } else {
            assert_eq!(*x, (ix + 10 * iy) as f64 * 0.125 - 1.0);
        }
    }
    let out = scratch("u.fld");
    write_field(&out, &g, &v).unwrap();
    same_bytes(&golden("u.fld"), &out);
}

#[test]
fn mask_dump() {
    let (g, m) = read_mask(&golden("mask.bin")).unwrap();
    assert_eq!(g, GRID);
    assert_eq!(m.row(1).to_vec(), vec![0, 1, 2, 2, 1]);
    assert_eq!(m.row(3).to_vec(), vec![0; 5]);
    let out = scratch("mask.bin");
    write_mask_labels(&out, &g, &m).unwrap();
    same_bytes(&golden("mask.bin"), &out);
}

#[test]
fn results_table() {
    let rows = read_results(&golden("results.csv")).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[2].n, rows[2].m, rows[2].b), (640, 16, 22));
    assert_eq!(rows[0].err_linf, 3e-5);
    let out = scratch("results.csv");
    write_results(&out, &rows).unwrap();
    same_bytes(&golden("results.csv"), &out);
}

#[test]
fn jumps_table() {
    let rows = read_jumps(&golden("jumps.csv")).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].sigma, 3.0);
    assert_eq!(rows[1].s, std::f64::consts::FRAC_PI_2);
    let out = scratch("jumps.csv");
    write_jump_rows(&out, &rows).unwrap();
    same_bytes(&golden("jumps.csv"), &out);
}

#[test]
fn wrong_magic_is_rejected() {
    assert!(read_field(&golden("mask.bin")).is_err());
    assert!(read_mask(&golden("u.fld")).is_err());
    assert!(read_jumps(&golden("results.csv")).is_err());
}
