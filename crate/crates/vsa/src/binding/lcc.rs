use num_complex::Complex64;

use crate::binding::conv::fft;
use crate::core::BlockCodeVector;
use crate::error::{Result, VsaError};

fn check_shapes(a: &BlockCodeVector, b: &BlockCodeVector) -> Result<()> {
    if a.n_blocks() != b.n_blocks() || a.block_size != b.block_size {
        return Err(VsaError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.kind != b.kind {
        return Err(VsaError::KindMismatch(format!("{:?} x {:?}", a.kind, b.kind)));
    }
    Ok(())
}

/// Local circular convolution: per block, hot indices add modulo block size
/// and phases multiply. Sparsity is preserved exactly.
pub fn lcc_bind(a: &BlockCodeVector, b: &BlockCodeVector) -> Result<BlockCodeVector> {
    check_shapes(a, b)?;
    let lb = a.block_size;
    let hot = a
        .hot
        .iter()
        .zip(&b.hot)
        .map(|(&(ia, pa), &(ib, pb))| ((ia + ib) % lb, pa * pb))
        .collect();
    BlockCodeVector::new(lb, a.kind, hot)
}

/// Inverse with respect to block-wise circular convolution: per block, hot
/// index becomes `(Lb - i) mod Lb` and the phase is conjugated.
pub fn lcc_inverse(a: &BlockCodeVector) -> Result<BlockCodeVector> {
    let lb = a.block_size;
    let hot = a
        .hot
        .iter()
        .map(|&(i, p)| ((lb - i) % lb, p.conj()))
        .collect();
    BlockCodeVector::new(lb, a.kind, hot)
}

/// Unbinding: `lcc_unbind(lcc_bind(a, b), a) == b` exactly.
pub fn lcc_unbind(c: &BlockCodeVector, a: &BlockCodeVector) -> Result<BlockCodeVector> {
    lcc_bind(c, &lcc_inverse(a)?)
}

fn per_block<F>(n_blocks: usize, a: &[Complex64], mut f: F) -> Result<Vec<Complex64>>
where
    F: FnMut(&mut [Complex64]),
{
    if n_blocks == 0 || a.len() % n_blocks != 0 {
        return Err(VsaError::BlockMismatch { n: a.len(), k: n_blocks });
    }
    let lb = a.len() / n_blocks;
    let mut out = a.to_vec();
    for block in out.chunks_mut(lb) {
        f(block);
    }
    Ok(out)
}

/// Dense per-block circular convolution via the FFT. Used when the inputs
/// are accumulators (superpositions of block-codes) rather than clean codes.
pub fn lcc_bind_dense(a: &[Complex64], b: &[Complex64], n_blocks: usize) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(VsaError::DimensionMismatch { left: a.len(), right: b.len() });
    }
    if n_blocks == 0 || a.len() % n_blocks != 0 {
        return Err(VsaError::BlockMismatch { n: a.len(), k: n_blocks });
    }
    let lb = a.len() / n_blocks;
    let mut fa = a.to_vec();
    let mut fb = b.to_vec();
    for block in fa.chunks_mut(lb) {
        fft(block, false);
    }
    for block in fb.chunks_mut(lb) {
        fft(block, false);
    }
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    let scale = 1.0 / lb as f64;
    for block in fa.chunks_mut(lb) {
        fft(block, true);
        for c in block.iter_mut() {
            *c *= scale;
        }
    }
    Ok(fa)
}

/// Block-wise spectral conjugate: the convolution inverse of each block.
pub fn lcc_inverse_dense(a: &[Complex64], n_blocks: usize) -> Result<Vec<Complex64>> {
    let lb = if n_blocks > 0 && a.len() % n_blocks == 0 {
        a.len() / n_blocks
    } else {
        return Err(VsaError::BlockMismatch { n: a.len(), k: n_blocks });
    };
    let scale = 1.0 / lb as f64;
    per_block(n_blocks, a, |block| {
        fft(block, false);
        for c in block.iter_mut() {
            *c = c.conj();
        }
        fft(block, true);
        for c in block.iter_mut() {
            *c *= scale;
        }
    })
}

/// Dense unbinding: bind with the block-wise spectral conjugate inverse.
pub fn lcc_unbind_dense(c: &[Complex64], a: &[Complex64], n_blocks: usize) -> Result<Vec<Complex64>> {
    lcc_bind_dense(c, &lcc_inverse_dense(a, n_blocks)?, n_blocks)
}
