//! Shared substrate: vector types, codebooks, similarity, superposition and
//! cleanup memory.

mod codebook;
mod ops;
mod vectors;

pub use codebook::{Codebook, CodebookSpec, CodeKind};
pub use ops::{
    cleanup, cosine_similarity, dot_conj, normalize_blockwise, normalize_topk, overlap, sign,
    superpose,
};
pub use vectors::{
    Accumulator, BlockCodeVector, BlockKind, DenseKind, DenseVector, SparseKind, SparseVector,
};

use statrs::function::gamma::ln_gamma;

/// Entropy of a sparse block-code in bits: `K * log2(N / K)`.
///
/// Always bounded by the entropy `log2(C(N, K))` of an unconstrained
/// K-sparse binary code of the same shape.
pub fn block_code_entropy_bits(n: usize, k: usize) -> f64 {
    assert!(k > 0 && n % k == 0, "K must divide N");
    k as f64 * (n as f64 / k as f64).log2()
}

/// `log2` of the binomial coefficient `C(n, k)`.
pub fn log2_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n);
    (ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
        / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_reference_block_code() {
        // N=128, K=16 block-code carries 16 * log2(8) = 48 bits.
        assert_eq!(block_code_entropy_bits(128, 16), 48.0);
        assert!(block_code_entropy_bits(128, 16) <= log2_binomial(128, 16));
    }

    #[test]
    fn binomial_entropy_matches_direct_count() {
        assert!((log2_binomial(10, 3) - 120f64.log2()).abs() < 1e-9);
    }
}
