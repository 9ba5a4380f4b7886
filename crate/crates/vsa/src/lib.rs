//! Vector symbolic architecture (VSA) operations over dense and sparse
//! distributed representations.
//!
//! The crate provides:
//! - [`core`]: vector types (dense bipolar/phasor, general sparse, sparse
//!   block-codes), codebooks, similarity, superposition and cleanup memory.
//! - [`binding`]: variable-binding operators and their inverses — Hadamard,
//!   circular convolution, sparsity-preserving tensor projection (SPTP) over
//!   sampling tensors, and local circular convolution (LCC) for block-codes —
//!   plus protected sums, permutation protection, clipping and fan-in math.
//! - [`cs`]: compressed-sensing machinery — compression, VSA readout, a
//!   FISTA lasso solver, box-dot dictionaries, empirical RIP and spark
//!   experiments.
//! - [`reasoning`]: key-value records, transformation vectors, analogical
//!   queries and the capacity-theory accuracy prediction.
//! - [`classify`]: similarity-preserving scalar encoders, key-value feature
//!   encoding with clipping, ridge-regression readout and cross-validation.
//! - [`cli`]: the experiment runner behind the `vsa` binary.

pub mod binding;
pub mod classify;
pub mod cli;
pub mod core;
pub mod cs;
pub mod error;
pub mod reasoning;
pub mod rng;

pub use error::{Result, VsaError};
