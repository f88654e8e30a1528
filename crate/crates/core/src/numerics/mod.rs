//! Spectral transforms, interpolation between discretizations, Krylov and
//! dense solvers, and special functions.

pub mod bessel;
pub mod chebyshev;
pub mod dense;
pub mod fft;
pub mod field;
pub mod gmres;
pub mod interp;

pub use field::{AnnularField, Edge, GridSpec, SpectralField2D};
