use num_complex::Complex64;

use crate::core::{DenseKind, DenseVector};
use crate::error::{Result, VsaError};

/// Component-wise (Hadamard) product of two dense code vectors.
///
/// Bipolar x bipolar stays bipolar and is self-inverse; phasor x phasor
/// stays unit-magnitude.
pub fn hadamard_bind(x: &DenseVector, y: &DenseVector) -> Result<DenseVector> {
    if x.len() != y.len() {
        return Err(VsaError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let kind = match (x.kind, y.kind) {
        (DenseKind::Bipolar, DenseKind::Bipolar) => DenseKind::Bipolar,
        (DenseKind::Phasor, DenseKind::Phasor) => DenseKind::Phasor,
        (a, b) => return Err(VsaError::KindMismatch(format!("{a:?} x {b:?}"))),
    };
    let components: Vec<Complex64> = x
        .components
        .iter()
        .zip(&y.components)
        .map(|(a, b)| a * b)
        .collect();
    DenseVector::new(kind, components)
}
