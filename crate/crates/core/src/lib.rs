//! Spectrally accurate embedded-boundary solver for Poisson and modified
//! Helmholtz problems on smooth, simply connected planar domains.
//!
//! The right-hand side is smoothly truncated inside the domain (function
//! intension), solved on a periodic box by FFT, corrected in a thin
//! body-fitted annulus by a Fourier-Chebyshev solve, stitched with layer
//! potentials, and finished with a second-kind boundary integral correction.

pub mod annular;
pub mod coupling;
pub mod cutoff;
pub mod driver;
pub mod geometry;
pub mod gridsolve;
pub mod numerics;
pub mod potentials;

pub use driver::{Params, SolverContext};
pub use geometry::{AnnularGrid, BoundaryCurve, GridClassification, RegularGrid, Side};
pub use gridsolve::PdeKind;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or geometric configuration was rejected before solving.
    #[error("rejected: {0}")]
    Rejected(String),
    /// An iterative method failed to reach its tolerance.
    #[error("{stage}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
        best: Vec<f64>,
    },
    #[error("singular system in {0}")]
    Singular(String),
    #[error("point outside domain: {0}")]
    OutsideDomain(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("linear algebra backend: {0}")]
    Lapack(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Rejected(_) | Error::Singular(_) | Error::OutsideDomain(_) => 2,
            Error::NoConvergence { .. } => 3,
            Error::Config(_) | Error::Io(_) | Error::Lapack(_) => 1,
        }
    }
}

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Rejected(msg.into()))
}
