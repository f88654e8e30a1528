//! Layer potentials: kernels, on-surface quadrature, close evaluation by
//! effective sources, and the homogeneous boundary integral equation.

pub mod bie;
pub mod boxsum;
pub mod kernels;
pub mod kress;
pub mod qfs;

pub use bie::{BieMode, HomogeneousBie};
pub use kernels::{KernelSet, LayerKind};
pub use kress::{kress_weights, layer_matrices, self_layer_matrices, singular_selfeval, LayerMatrices};
pub use qfs::{EffectiveSource, EvalSide, QfsOptions};
