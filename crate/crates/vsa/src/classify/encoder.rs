use num_complex::Complex64;

use crate::core::{BlockCodeVector, BlockKind};
use crate::error::{Result, VsaError};

/// Similarity-preserving scalar encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LevelScheme {
    /// Sparse block-code: each level increment shifts one block's hot index
    /// by one, cycling through blocks starting at block 0. N−K+1 levels.
    BlockShift,
    /// Dense bipolar: level v has +1 in the first v components, −1 after.
    /// N+1 levels.
    Thermometric,
}

#[derive(Debug, Clone, Copy)]
pub struct LevelEncoder {
    n: usize,
    k: usize,
    scheme: LevelScheme,
}

impl LevelEncoder {
    pub fn block_shift(n: usize, k: usize) -> Result<Self> {
        if k == 0 || n == 0 || n % k != 0 {
            return Err(VsaError::BlockMismatch { n, k });
        }
        Ok(Self { n, k, scheme: LevelScheme::BlockShift })
    }

    pub fn thermometric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(VsaError::InvalidParameter("thermometric needs n > 0".into()));
        }
        Ok(Self { n, k: 0, scheme: LevelScheme::Thermometric })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn scheme(&self) -> LevelScheme {
        self.scheme
    }

    pub fn n_levels(&self) -> usize {
        match self.scheme {
            LevelScheme::BlockShift => self.n - self.k + 1,
            LevelScheme::Thermometric => self.n + 1,
        }
    }

    /// Hot index of block `b` at `level`: the number of increments the
    /// cyclic schedule has applied to that block.
    fn hot_index(&self, level: usize, b: usize) -> usize {
        (level + self.k - 1 - b) / self.k
    }

    /// Block-code form of a level (block-shift scheme only).
    pub fn block_code(&self, level: usize) -> Result<BlockCodeVector> {
        if self.scheme != LevelScheme::BlockShift {
            return Err(VsaError::KindMismatch("block_code needs the block-shift scheme".into()));
        }
        self.check_level(level)?;
        let one = Complex64::new(1.0, 0.0);
        let hot = (0..self.k).map(|b| (self.hot_index(level, b), one)).collect();
        BlockCodeVector::new(self.n / self.k, BlockKind::Binary, hot)
    }

    /// Dense form of a level (either scheme).
    pub fn encode_level(&self, level: usize) -> Result<Vec<f64>> {
        self.check_level(level)?;
        match self.scheme {
            LevelScheme::BlockShift => {
                let lb = self.n / self.k;
                let mut v = vec![0.0; self.n];
                for b in 0..self.k {
                    v[b * lb + self.hot_index(level, b)] = 1.0;
                }
                Ok(v)
            }
            LevelScheme::Thermometric => {
                Ok((0..self.n).map(|i| if i < level { 1.0 } else { -1.0 }).collect())
            }
        }
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.n_levels() {
            return Err(VsaError::InvalidParameter(format!(
                "level {level} out of range (max {})",
                self.n_levels() - 1
            )));
        }
        Ok(())
    }

    /// Number of positions where both levels are active (block-shift) /
    /// agree in sign (thermometric is reported as matching components).
    pub fn overlap(&self, a: usize, b: usize) -> Result<usize> {
        let (va, vb) = (self.encode_level(a)?, self.encode_level(b)?);
        Ok(match self.scheme {
            LevelScheme::BlockShift => va
                .iter()
                .zip(&vb)
                .filter(|(x, y)| **x == 1.0 && **y == 1.0)
                .count(),
            LevelScheme::Thermometric => va.iter().zip(&vb).filter(|(x, y)| x == y).count(),
        })
    }
}
