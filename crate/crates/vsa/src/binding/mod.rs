//! Variable-binding operators and their inverses.
//!
//! Four families: Hadamard product (dense codes), circular convolution with
//! its correlation adjoint, sparsity-preserving tensor projection (SPTP) over
//! sampling tensors, and local circular convolution (LCC) for block-codes.
//! Also protected sums, permutation protection, clipping and the fan-in
//! calibration for SPTP.

mod conv;
mod fanin;
mod hadamard;
mod lcc;
mod protect;
mod sptp;
mod tensor;

pub use conv::{circular_convolve, circular_correlate};
pub use fanin::{binomial_cdf_below, min_fanin, min_fanin_closed_form_theta1};
pub use hadamard::hadamard_bind;
pub use lcc::{lcc_bind, lcc_bind_dense, lcc_inverse, lcc_inverse_dense, lcc_unbind,
    lcc_unbind_dense};
pub use protect::{clip, permute_protect, protected_sum, Permutation};
pub use sptp::{sptp_bind, sptp_bind_phasor, sptp_unbind, sptp_unbind_phasor};
pub use tensor::{SamplingTensor, TensorMode, TensorSpec};
