use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::core::{BlockCodeVector, BlockKind, DenseKind, DenseVector, SparseKind, SparseVector};
use crate::error::{Result, VsaError};
use crate::rng;

/// Kind shared by every column of a codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    DenseBipolar,
    DensePhasor,
    SparseBinary { k: usize },
    SparsePhasor { k: usize },
    BlockBinary { k: usize },
    BlockPhasor { k: usize },
}

/// Seed-form description of a codebook; regeneration is bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodebookSpec {
    pub n_rows: usize,
    pub n_cols: usize,
    pub kind: CodeKind,
    pub seed: u64,
}

/// N x M matrix of atomic code vectors, column-indexed. Columns are
/// materialized densely; column `i` is generated from the child seed
/// `(seed, i)` so regeneration from the spec is bit-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    spec: CodebookSpec,
    columns: Vec<Vec<Complex64>>,
}

impl Codebook {
    pub fn generate(n_rows: usize, n_cols: usize, kind: CodeKind, seed: u64) -> Result<Self> {
        Self::from_spec(CodebookSpec { n_rows, n_cols, kind, seed })
    }

    pub fn from_spec(spec: CodebookSpec) -> Result<Self> {
        let CodebookSpec { n_rows, n_cols, kind, seed } = spec;
        let columns = (0..n_cols)
            .map(|i| {
                let s = rng::child_seed(seed, i as u64);
                Ok(match kind {
                    CodeKind::DenseBipolar => {
                        DenseVector::random(n_rows, DenseKind::Bipolar, s)?.components
                    }
                    CodeKind::DensePhasor => {
                        DenseVector::random(n_rows, DenseKind::Phasor, s)?.components
                    }
                    CodeKind::SparseBinary { k } => {
                        SparseVector::random(n_rows, k, SparseKind::Binary, s)?.to_dense()
                    }
                    CodeKind::SparsePhasor { k } => {
                        SparseVector::random(n_rows, k, SparseKind::Phasor, s)?.to_dense()
                    }
                    CodeKind::BlockBinary { k } => {
                        BlockCodeVector::random(n_rows, k, BlockKind::Binary, s)?.to_dense()
                    }
                    CodeKind::BlockPhasor { k } => {
                        BlockCodeVector::random(n_rows, k, BlockKind::Phasor, s)?.to_dense()
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, columns })
    }

    pub fn spec(&self) -> CodebookSpec {
        self.spec
    }

    pub fn n_rows(&self) -> usize {
        self.spec.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.spec.n_cols
    }

    pub fn kind(&self) -> CodeKind {
        self.spec.kind
    }

    pub fn column(&self, i: usize) -> &[Complex64] {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// Column as a block-code. Only valid for block kinds.
    pub fn block_column(&self, i: usize) -> Result<BlockCodeVector> {
        match self.spec.kind {
            CodeKind::BlockBinary { k } => {
                BlockCodeVector::from_dense(k, BlockKind::Binary, &self.columns[i])
            }
            CodeKind::BlockPhasor { k } => {
                BlockCodeVector::from_dense(k, BlockKind::Phasor, &self.columns[i])
            }
            other => Err(VsaError::KindMismatch(format!(
                "{other:?} columns are not block-codes"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{cleanup, superpose};

    #[test]
    fn regeneration_is_bit_identical() {
        let a = Codebook::generate(64, 8, CodeKind::DensePhasor, 3).unwrap();
        let b = Codebook::from_spec(a.spec()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = CodebookSpec {
            n_rows: 128,
            n_cols: 16,
            kind: CodeKind::BlockBinary { k: 16 },
            seed: 42,
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: CodebookSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert_eq!(Codebook::from_spec(spec).unwrap(), Codebook::from_spec(back).unwrap());
    }

    #[test]
    fn noisy_cleanup_recovers_target() {
        // Block-code cleanup with 3 additive distractors, N=2048, K/N=1/16:
        // at least 99% of 1000 trials must return the target column.
        let n = 2048;
        let k = n / 16;
        let book = Codebook::generate(n, 16, CodeKind::BlockBinary { k }, 17).unwrap();
        let mut hits = 0;
        for t in 0..1000u64 {
            let target = (t % 16) as usize;
            // Distractors are random block-codes outside the codebook.
            let noise: Vec<Vec<Complex64>> = (0..3)
                .map(|d| {
                    BlockCodeVector::random(n, k, BlockKind::Binary, crate::rng::child_seed(99, 3 * t + d))
                        .unwrap()
                        .to_dense()
                })
                .collect();
            let mut parts = vec![book.column(target)];
            parts.extend(noise.iter().map(|v| v.as_slice()));
            let acc = superpose(parts.into_iter()).unwrap();
            let (hit, _) = cleanup(&acc.components, book.columns()).unwrap();
            if hit == target {
                hits += 1;
            }
        }
        assert!(hits >= 990, "hits = {hits}");
    }
}
