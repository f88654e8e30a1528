//! Second-kind equation for the homogeneous correction u_H = D ζ.

use super::kernels::KernelSet;
use super::kress::self_layer_matrices;
use crate::geometry::BoundaryCurve;
use crate::numerics::dense::{condition_number, DenseLu};
use crate::numerics::gmres::gmres;
use crate::{Error, Result};
use ndarray::{Array2, ArrayView1};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BieMode {
    Dense,
    Iterative,
}

/// (D_pv − ½)ζ = data: the interior limit of D ζ equals the data.
pub struct HomogeneousBie {
    pub mode: BieMode,
    matrix: Array2<f64>,
    lu: Option<DenseLu>,
    tol: f64,
}

impl HomogeneousBie {
    pub fn new(curve: &BoundaryCurve, kernels: &KernelSet, mode: BieMode, tol: f64) -> Result<Self> {
        let (_, d) = self_layer_matrices(curve, kernels)?;
        Self::from_double_layer(d, mode, tol)
    }

    pub fn from_double_layer(mut d: Array2<f64>, mode: BieMode, tol: f64) -> Result<Self> {
        for i in 0..d.nrows() {
            d[[i, i]] -= 0.5;
        }
        let lu = match mode {
            BieMode::Dense => Some(DenseLu::new(&d, 1e-12, "boundary integral matrix")?),
            BieMode::Iterative => None,
        };
        Ok(Self { mode, matrix: d, lu, tol })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn condition_number(&self) -> Result<f64> {
        condition_number(&self.matrix)
    }

    /// ζ and the iteration count (0 for the dense mode).
    pub fn solve(&self, data: &[f64]) -> Result<(Vec<f64>, usize)> {
        match &self.lu {
            Some(lu) => Ok((lu.solve(ArrayView1::from(data)).to_vec(), 0)),
            None => {
                let out = gmres(|x| self.matrix.dot(&ArrayView1::from(x)).to_vec(), |y| y.to_vec(), data, self.tol, 200)
                    .map_err(|e| match e {
                        Error::NoConvergence { iterations, residual, history, best, .. } => Error::NoConvergence {
                            stage: "boundary integral equation",
                            iterations,
                            residual,
                            history,
                            best,
                        },
                        other => other,
                    })?;
                Ok((out.x, out.iterations))
            }
        }
    }
}
