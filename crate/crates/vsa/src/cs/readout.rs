use crate::cs::{Dictionary, SamplingMatrix};
use crate::error::{Result, VsaError};

/// Dimensionality compression `x = Xi a`, evaluated over the support only.
pub fn compress(dict: &impl Dictionary, support: &[(usize, f64)]) -> Result<Vec<f64>> {
    if support.iter().any(|&(i, _)| i >= dict.n_cols()) {
        return Err(VsaError::DimensionMismatch {
            left: dict.n_cols(),
            right: support.iter().map(|&(i, _)| i).max().unwrap_or(0) + 1,
        });
    }
    Ok(dict.compress(support))
}

/// Standard VSA readout: `a_hat_i = Phi_i^T x / N`. Noisy but decodes each
/// coefficient independently.
pub fn vsa_readout(phi: &SamplingMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != phi.n_rows {
        return Err(VsaError::DimensionMismatch { left: phi.n_rows, right: x.len() });
    }
    let mut out = phi.tr_matvec(x)?;
    let n = phi.n_rows as f64;
    for v in out.iter_mut() {
        *v /= n * phi.scale * phi.scale;
    }
    Ok(out)
}
