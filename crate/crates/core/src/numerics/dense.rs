//! Dense linear algebra: a small hand-rolled LU for the many tiny per-mode
//! systems, and LAPACK-backed factorizations for the boundary matrices.

use crate::{Error, Result};
use ndarray::{Array1, Array2, ArrayView1};
use ndarray_linalg::{
    Factorize, JobSvd, LUFactorized, ReciprocalConditionNum, Solve, SVDDC,
};

/// LU with partial pivoting for small row-major matrices.
#[derive(Clone, Debug)]
pub struct SmallLu {
    n: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl SmallLu {
    pub fn new(mut a: Vec<f64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut piv = vec![0; n];
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            if !(pmax > 1e-14 * scale) {
                return Err(Error::Singular(format!("pivot {k} of {n}x{n} system")));
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let l = a[i * n + k] / d;
                a[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= l * a[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, a, piv })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s / self.a[i * n + i];
        }
    }
}

fn lapack(e: impl std::fmt::Display) -> Error {
    Error::Lapack(e.to_string())
}

/// LAPACK LU factorization, retained for repeated solves.
pub struct DenseLu {
    lu: LUFactorized<ndarray::OwnedRepr<f64>>,
    n: usize,
}

impl DenseLu {
    /// Factorizes `a`; rejects matrices with reciprocal condition below `rcond_min`.
    pub fn new(a: &Array2<f64>, rcond_min: f64, what: &str) -> Result<Self> {
        let lu = a
            .factorize()
            .map_err(|_| Error::Singular(what.to_string()))?;
        let rc = lu.rcond().map_err(lapack)?;
        if !(rc >= rcond_min) {
            return Err(Error::Singular(format!("{what} (rcond {rc:.2e})")));
        }
        Ok(Self { lu, n: a.nrows() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: ArrayView1<f64>) -> Array1<f64> {
        self.lu
            .solve(&b.to_owned())
            .expect("LU solve on a factorized nonsingular matrix")
    }

    /// Solve for several right-hand sides stored as columns.
    pub fn solve_columns(&self, b: &Array2<f64>) -> Array2<f64> {
        let mut x = Array2::zeros(b.dim());
        for (mut xc, bc) in x.columns_mut().into_iter().zip(b.columns()) {
            xc.assign(&self.solve(bc));
        }
        x
    }

    pub fn rcond(&self) -> f64 {
        self.lu.rcond().unwrap_or(0.0)
    }
}

/// Minimum-norm least-squares solution with singular values below
/// `tol · σ_max` discarded.
pub fn regularized_dense_solve(a: &Array2<f64>, b: &Array1<f64>, tol: f64) -> Result<Array1<f64>> {
    let (u, s, vt) = a.svddc(JobSvd::Some).map_err(lapack)?;
    let (u, vt) = (u.expect("U requested"), vt.expect("VT requested"));
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let mut x = Array1::zeros(a.ncols());
    if smax == 0.0 {
        return Ok(x);
    }
    let utb = u.t().dot(b);
    for (k, &sk) in s.iter().enumerate() {
        if sk > tol * smax {
            let c = utb[k] / sk;
            x.scaled_add(c, &vt.row(k));
        }
    }
    Ok(x)
}

pub fn singular_values(a: &Array2<f64>) -> Result<Array1<f64>> {
    let (_, s, _) = a.svddc(JobSvd::None).map_err(lapack)?;
    Ok(s)
}

pub fn condition_number(a: &Array2<f64>) -> Result<f64> {
    let s = singular_values(a)?;
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(max / min)
}
