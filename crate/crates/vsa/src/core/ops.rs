use num_complex::Complex64;

use crate::core::{Accumulator, BlockCodeVector, BlockKind, DenseKind, DenseVector, SparseKind,
    SparseVector};
use crate::error::{Result, VsaError};

/// Inner product `sum_i u_i * conj(v_i)`.
pub fn dot_conj(u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(VsaError::DimensionMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b.conj()).sum())
}

/// Real part of the normalized inner product (cosine similarity), conjugating
/// the second argument. Zero whenever either vector has zero norm.
pub fn cosine_similarity(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    let dot = dot_conj(u, v)?;
    let nu: f64 = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok(dot.re / (nu * nv))
}

/// Unnormalized variant: real part of the raw inner product. For binary
/// vectors this is the overlap count.
pub fn overlap(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    Ok(dot_conj(u, v)?.re)
}

/// Exact component-wise sum. Order-independent; errors on empty input or
/// length mismatch.
pub fn superpose<'a, I>(vectors: I) -> Result<Accumulator>
where
    I: IntoIterator<Item = &'a [Complex64]>,
{
    let mut it = vectors.into_iter();
    let first = it
        .next()
        .ok_or_else(|| VsaError::EmptyInput("superpose of no vectors".into()))?;
    let mut acc = Accumulator::from_components(first.to_vec());
    for v in it {
        acc.add_slice(v)?;
    }
    Ok(acc)
}

/// Keeps the K largest-magnitude components (ties -> lowest index); values
/// are set to 1 for real inputs or phase-normalized for complex ones.
pub fn normalize_topk(acc: &Accumulator, k: usize) -> Result<SparseVector> {
    if k > acc.len() {
        return Err(VsaError::InvalidParameter(format!(
            "K={k} exceeds dimension {}",
            acc.len()
        )));
    }
    let mut order: Vec<usize> = (0..acc.len()).collect();
    // Stable by magnitude descending, then index ascending.
    order.sort_by(|&a, &b| {
        acc.components[b]
            .norm_sqr()
            .partial_cmp(&acc.components[a].norm_sqr())
            .unwrap()
            .then(a.cmp(&b))
    });
    let all_real = acc.components.iter().all(|c| c.im == 0.0);
    let support: Vec<(usize, Complex64)> = order[..k]
        .iter()
        .map(|&i| {
            let z = acc.components[i];
            let v = if all_real || z.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                z / z.norm()
            };
            (i, v)
        })
        .collect();
    let kind = if all_real { SparseKind::Binary } else { SparseKind::Phasor };
    SparseVector::new(acc.len(), kind, support)
}

/// Per-block argmax of magnitude. A clean block-code is a fixed point.
pub fn normalize_blockwise(acc: &Accumulator, k: usize) -> Result<BlockCodeVector> {
    let all_real = acc.components.iter().all(|c| c.im == 0.0);
    let kind = if all_real { BlockKind::Binary } else { BlockKind::Phasor };
    BlockCodeVector::from_dense(k, kind, &acc.components)
}

/// Maps every component to ±1 by the sign of its real part; ties (0) -> +1.
pub fn sign(acc: &Accumulator) -> Result<DenseVector> {
    let components = acc
        .components
        .iter()
        .map(|c| Complex64::new(if c.re >= 0.0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    DenseVector::new(DenseKind::Bipolar, components)
}

/// Nearest-neighbor cleanup: argmax of cosine similarity over columns, with
/// the winning score. Deterministic tie-break: lowest index.
pub fn cleanup(query: &[Complex64], columns: &[Vec<Complex64>]) -> Result<(usize, f64)> {
    if columns.is_empty() {
        return Err(VsaError::EmptyInput("cleanup against empty codebook".into()));
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, col) in columns.iter().enumerate() {
        let s = cosine_similarity(query, col)?;
        if s > best.1 {
            best = (i, s);
        }
    }
    Ok(best)
}
