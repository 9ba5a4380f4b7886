use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Result, VsaError};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenseKind {
    Bipolar,
    Phasor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparseKind {
    Binary,
    Phasor,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Binary,
    Phasor,
}

/// Length-N dense code vector, bipolar (±1) or unit-magnitude complex phasor.
///
/// Components are stored as `Complex64`; bipolar vectors keep a zero
/// imaginary part so ±1 arithmetic stays exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseVector {
    pub kind: DenseKind,
    pub components: Vec<Complex64>,
}

impl DenseVector {
    pub fn new(kind: DenseKind, components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(VsaError::EmptyInput("dense vector of length 0".into()));
        }
        let v = Self { kind, components };
        v.check_invariants()?;
        Ok(v)
    }

    /// i.i.d. random code vector: uniform ±1 components (bipolar) or uniform
    /// phases on the unit circle (phasor). Deterministic per seed.
    pub fn random(n: usize, kind: DenseKind, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(VsaError::InvalidParameter("N must be >= 1".into()));
        }
        let mut rng = rng::stream(seed);
        let components = match kind {
            DenseKind::Bipolar => (0..n)
                .map(|_| Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0))
                .collect(),
            DenseKind::Phasor => (0..n)
                .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * TAU))
                .collect(),
        };
        Ok(Self { kind, components })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn check_invariants(&self) -> Result<()> {
        let ok = match self.kind {
            DenseKind::Bipolar => self
                .components
                .iter()
                .all(|c| c.im == 0.0 && (c.re == 1.0 || c.re == -1.0)),
            DenseKind::Phasor => self
                .components
                .iter()
                .all(|c| (c.norm() - 1.0).abs() < 1e-9),
        };
        if ok {
            Ok(())
        } else {
            Err(VsaError::InvalidParameter(
                "components violate dense-kind constraint".into(),
            ))
        }
    }
}

/// Length-M K-sparse vector: support is a sorted list of (index, value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    pub dim: usize,
    pub kind: SparseKind,
    /// Sorted by index; indices unique and < dim.
    pub support: Vec<(usize, Complex64)>,
}

impl SparseVector {
    pub fn new(dim: usize, kind: SparseKind, mut support: Vec<(usize, Complex64)>) -> Result<Self> {
        support.sort_by_key(|(i, _)| *i);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(VsaError::InvalidParameter("duplicate support index".into()));
        }
        if support.last().is_some_and(|(i, _)| *i >= dim) {
            return Err(VsaError::InvalidParameter("support index out of range".into()));
        }
        let ok = match kind {
            SparseKind::Binary => support.iter().all(|(_, v)| *v == Complex64::new(1.0, 0.0)),
            SparseKind::Phasor => support.iter().all(|(_, v)| (v.norm() - 1.0).abs() < 1e-9),
            SparseKind::Real => support.iter().all(|(_, v)| v.im == 0.0),
        };
        if !ok {
            return Err(VsaError::InvalidParameter(
                "support values violate sparse-kind constraint".into(),
            ));
        }
        Ok(Self { dim, kind, support })
    }

    /// Exactly-K support drawn uniformly without replacement; phasor kind
    /// additionally draws uniform phases.
    pub fn random(dim: usize, k: usize, kind: SparseKind, seed: u64) -> Result<Self> {
        if k > dim {
            return Err(VsaError::InvalidParameter(format!(
                "K={k} exceeds dimension M={dim}"
            )));
        }
        let mut rng = rng::stream(seed);
        let mut idx = index::sample(&mut rng, dim, k).into_vec();
        idx.sort_unstable();
        let support = idx
            .into_iter()
            .map(|i| {
                let v = match kind {
                    SparseKind::Binary => Complex64::new(1.0, 0.0),
                    SparseKind::Phasor => Complex64::from_polar(1.0, rng.random::<f64>() * TAU),
                    SparseKind::Real => Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 0.0),
                };
                (i, v)
            })
            .collect();
        Ok(Self { dim, kind, support })
    }

    pub fn l0(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; self.dim];
        for &(i, v) in &self.support {
            out[i] = v;
        }
        out
    }

    /// Indices of the support as a boolean mask.
    pub fn mask(&self) -> Vec<bool> {
        let mut out = vec![false; self.dim];
        for &(i, _) in &self.support {
            out[i] = true;
        }
        out
    }
}

/// N-dimensional sparse block-code: K blocks of size N/K with exactly one
/// hot component per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockCodeVector {
    pub block_size: usize,
    pub kind: BlockKind,
    /// Per block: (index within block, phase). Binary kind keeps phase 1.
    pub hot: Vec<(usize, Complex64)>,
}

impl BlockCodeVector {
    pub fn new(block_size: usize, kind: BlockKind, hot: Vec<(usize, Complex64)>) -> Result<Self> {
        if block_size == 0 || hot.is_empty() {
            return Err(VsaError::InvalidParameter("empty block-code".into()));
        }
        if hot.iter().any(|(i, _)| *i >= block_size) {
            return Err(VsaError::InvalidParameter("hot index out of block".into()));
        }
        let ok = match kind {
            BlockKind::Binary => hot.iter().all(|(_, v)| *v == Complex64::new(1.0, 0.0)),
            BlockKind::Phasor => hot.iter().all(|(_, v)| (v.norm() - 1.0).abs() < 1e-9),
        };
        if !ok {
            return Err(VsaError::InvalidParameter(
                "hot values violate block-kind constraint".into(),
            ));
        }
        Ok(Self { block_size, kind, hot })
    }

    /// Random block-code: each block's hot index i.i.d. uniform over
    /// [0, N/K); phasor kind also draws uniform phases.
    pub fn random(n: usize, k: usize, kind: BlockKind, seed: u64) -> Result<Self> {
        if k == 0 || n % k != 0 {
            return Err(VsaError::BlockMismatch { n, k });
        }
        let block_size = n / k;
        let mut rng = rng::stream(seed);
        let hot = (0..k)
            .map(|_| {
                let i = rng.random_range(0..block_size);
                let v = match kind {
                    BlockKind::Binary => Complex64::new(1.0, 0.0),
                    BlockKind::Phasor => Complex64::from_polar(1.0, rng.random::<f64>() * TAU),
                };
                (i, v)
            })
            .collect();
        Ok(Self { block_size, kind, hot })
    }

    /// Identity element for block-wise circular convolution: every block hot
    /// at index 0 with phase 1.
    pub fn identity(n: usize, k: usize, kind: BlockKind) -> Result<Self> {
        if k == 0 || n % k != 0 {
            return Err(VsaError::BlockMismatch { n, k });
        }
        Ok(Self {
            block_size: n / k,
            kind,
            hot: vec![(0, Complex64::new(1.0, 0.0)); k],
        })
    }

    pub fn n_blocks(&self) -> usize {
        self.hot.len()
    }

    pub fn dim(&self) -> usize {
        self.hot.len() * self.block_size
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; self.dim()];
        for (b, &(i, v)) in self.hot.iter().enumerate() {
            out[b * self.block_size + i] = v;
        }
        out
    }

    /// Per-block argmax of magnitude (ties -> lowest index). Inverse of
    /// `to_dense` on clean block-codes.
    pub fn from_dense(n_blocks: usize, kind: BlockKind, dense: &[Complex64]) -> Result<Self> {
        if n_blocks == 0 || dense.len() % n_blocks != 0 {
            return Err(VsaError::BlockMismatch { n: dense.len(), k: n_blocks });
        }
        let block_size = dense.len() / n_blocks;
        let hot = (0..n_blocks)
            .map(|b| {
                let block = &dense[b * block_size..(b + 1) * block_size];
                let mut best = 0usize;
                for (i, c) in block.iter().enumerate() {
                    if c.norm_sqr() > block[best].norm_sqr() {
                        best = i;
                    }
                }
                let v = match kind {
                    BlockKind::Binary => Complex64::new(1.0, 0.0),
                    BlockKind::Phasor => {
                        let z = block[best];
                        if z.norm() == 0.0 {
                            Complex64::new(1.0, 0.0)
                        } else if (z.norm() - 1.0).abs() < 1e-9 {
                            z
                        } else {
                            z / z.norm()
                        }
                    }
                };
                (best, v)
            })
            .collect();
        Self::new(block_size, kind, hot)
    }

    pub fn to_sparse(&self) -> SparseVector {
        let kind = match self.kind {
            BlockKind::Binary => SparseKind::Binary,
            BlockKind::Phasor => SparseKind::Phasor,
        };
        let support = self
            .hot
            .iter()
            .enumerate()
            .map(|(b, &(i, v))| (b * self.block_size + i, v))
            .collect();
        SparseVector { dim: self.dim(), kind, support }
    }
}

/// Exact component-wise sum of constituent vectors; normalization back into
/// code space is a separate explicit step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub components: Vec<Complex64>,
}

impl Accumulator {
    pub fn zero(n: usize) -> Self {
        Self { components: vec![Complex64::ZERO; n] }
    }

    pub fn from_components(components: Vec<Complex64>) -> Self {
        Self { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add_slice(&mut self, v: &[Complex64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(VsaError::DimensionMismatch { left: self.len(), right: v.len() });
        }
        for (a, b) in self.components.iter_mut().zip(v) {
            *a += b;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_generation_is_deterministic() {
        let a = DenseVector::random(4, DenseKind::Bipolar, 9).unwrap();
        let b = DenseVector::random(4, DenseKind::Bipolar, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dense_zero_length_rejected() {
        assert!(DenseVector::random(0, DenseKind::Bipolar, 0).is_err());
    }

    #[test]
    fn bipolar_mean_concentrates() {
        let v = DenseVector::random(10_000, DenseKind::Bipolar, 3).unwrap();
        let mean: f64 = v.components.iter().map(|c| c.re).sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 0.03, "mean {mean}");
    }

    #[test]
    fn phasor_magnitudes_are_unit() {
        let v = DenseVector::random(4, DenseKind::Phasor, 5).unwrap();
        for c in &v.components {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sparse_edge_cases() {
        let empty = SparseVector::random(10, 0, SparseKind::Binary, 1).unwrap();
        assert_eq!(empty.l0(), 0);
        let full = SparseVector::random(10, 10, SparseKind::Binary, 1).unwrap();
        assert_eq!(full.l0(), 10);
        assert!(full.support.iter().all(|(_, v)| *v == Complex64::new(1.0, 0.0)));
        assert!(SparseVector::random(10, 11, SparseKind::Binary, 1).is_err());
    }

    #[test]
    fn sparse_phasor_nonzeros_are_unit() {
        let v = SparseVector::random(1000, 10, SparseKind::Phasor, 2).unwrap();
        assert_eq!(v.l0(), 10);
        for (_, c) in &v.support {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn block_code_structure() {
        // All blocks of size 1 force hot index 0.
        let forced = BlockCodeVector::random(8, 8, BlockKind::Binary, 0).unwrap();
        assert!(forced.hot.iter().all(|(i, _)| *i == 0));

        let v = BlockCodeVector::random(8, 2, BlockKind::Binary, 0).unwrap();
        let s = v.to_sparse();
        assert_eq!(s.l0(), 2);
        assert!(s.support[0].0 < 4 && s.support[1].0 >= 4 && s.support[1].0 < 8);

        assert!(BlockCodeVector::random(8, 3, BlockKind::Binary, 0).is_err());
    }

    #[test]
    fn block_code_dense_round_trip() {
        for seed in 0..20 {
            let v = BlockCodeVector::random(64, 8, BlockKind::Phasor, seed).unwrap();
            let back = BlockCodeVector::from_dense(8, BlockKind::Phasor, &v.to_dense()).unwrap();
            assert_eq!(v, back);
        }
    }
}
