use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::binding::lcc_bind;
use crate::classify::encoder::{LevelEncoder, LevelScheme};
use crate::core::Codebook;
use crate::error::{Result, VsaError};

/// Everything that determines one classification pipeline.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: usize,
    /// Number of blocks; ignored by the thermometric scheme.
    pub k: usize,
    pub kappa: f64,
    pub lambda: f64,
    pub scheme: LevelScheme,
    pub folds: usize,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn encoder(&self) -> Result<LevelEncoder> {
        match self.scheme {
            LevelScheme::BlockShift => LevelEncoder::block_shift(self.n, self.k),
            LevelScheme::Thermometric => LevelEncoder::thermometric(self.n),
        }
    }
}

/// Hidden representation of one sample: the clipped superposition of
/// key-value bound pairs, one pair per feature. Block-shift values bind to
/// block-code keys by blockwise circular convolution; thermometric values
/// bind to bipolar keys by component-wise multiplication.
pub fn encode_sample(
    encoder: &LevelEncoder,
    keys: &Codebook,
    levels: &[usize],
    kappa: f64,
) -> Result<Vec<f64>> {
    if levels.len() != keys.n_cols() {
        return Err(VsaError::DimensionMismatch { left: keys.n_cols(), right: levels.len() });
    }
    if keys.n_rows() != encoder.n() {
        return Err(VsaError::DimensionMismatch { left: encoder.n(), right: keys.n_rows() });
    }
    if kappa < 1.0 {
        return Err(VsaError::InvalidParameter("kappa must be >= 1".into()));
    }
    let mut acc = vec![0.0; encoder.n()];
    match encoder.scheme() {
        LevelScheme::BlockShift => {
            let lb = encoder.n() / encoder.k();
            for (i, &level) in levels.iter().enumerate() {
                let bound = lcc_bind(&keys.block_column(i)?, &encoder.block_code(level)?)?;
                for (b, &(hot, _)) in bound.hot.iter().enumerate() {
                    acc[b * lb + hot] += 1.0;
                }
            }
        }
        LevelScheme::Thermometric => {
            for (i, &level) in levels.iter().enumerate() {
                let value = encoder.encode_level(level)?;
                for ((a, key), v) in acc.iter_mut().zip(keys.column(i)).zip(value) {
                    *a += key.re * v;
                }
            }
        }
    }
    for a in &mut acc {
        *a = a.clamp(-kappa, kappa);
    }
    Ok(acc)
}

/// Linear readout trained in closed form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RidgeModel {
    /// classes x N readout matrix.
    pub weights: Vec<Vec<f64>>,
    pub lambda: f64,
}

/// Ridge regression onto one-hot class targets:
/// `W = Y^T H (H^T H + lambda I)^{-1}`, computed through whichever Gram
/// matrix (features or samples) is smaller. `lambda = 0` on a singular
/// system is reported as a numerical error.
pub fn ridge_train(
    hidden: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    lambda: f64,
) -> Result<RidgeModel> {
    if hidden.is_empty() {
        return Err(VsaError::EmptyInput("no training samples".into()));
    }
    if hidden.len() != labels.len() {
        return Err(VsaError::DimensionMismatch { left: hidden.len(), right: labels.len() });
    }
    if lambda < 0.0 || n_classes == 0 {
        return Err(VsaError::InvalidParameter("lambda >= 0, n_classes >= 1 required".into()));
    }
    let s = hidden.len();
    let n = hidden[0].len();
    let h = DMatrix::from_fn(s, n, |r, c| hidden[r][c]);
    let y = DMatrix::from_fn(s, n_classes, |r, c| if labels[r] == c { 1.0 } else { 0.0 });

    let weights = if s <= n {
        // Dual form: W = Y^T (H H^T + lambda I)^{-1} H.
        let mut gram = &h * h.transpose();
        for i in 0..s {
            gram[(i, i)] += lambda;
        }
        let chol = gram
            .cholesky()
            .ok_or_else(|| VsaError::Numerical("singular ridge system (lambda too small)".into()))?;
        chol.solve(&y).transpose() * h
    } else {
        // Primal form: solve (H^T H + lambda I) Z = H^T Y, W = Z^T.
        let mut gram = h.transpose() * &h;
        for i in 0..n {
            gram[(i, i)] += lambda;
        }
        let chol = gram
            .cholesky()
            .ok_or_else(|| VsaError::Numerical("singular ridge system (lambda too small)".into()))?;
        chol.solve(&(h.transpose() * &y)).transpose()
    };

    Ok(RidgeModel {
        weights: (0..n_classes)
            .map(|c| weights.row(c).iter().copied().collect())
            .collect(),
        lambda,
    })
}

/// Highest readout score wins; ties break toward the lower class index.
pub fn predict(model: &RidgeModel, hidden: &[f64]) -> Result<usize> {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (c, w) in model.weights.iter().enumerate() {
        if w.len() != hidden.len() {
            return Err(VsaError::DimensionMismatch { left: w.len(), right: hidden.len() });
        }
        let score: f64 = w.iter().zip(hidden).map(|(a, b)| a * b).sum();
        if score > best.1 {
            best = (c, score);
        }
    }
    Ok(best.0)
}
