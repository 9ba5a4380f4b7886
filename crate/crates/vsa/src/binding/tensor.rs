use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VsaError};
use crate::rng;

/// How the coincidence pairs of the sampling tensor are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorMode {
    /// Fan-in i.i.d. pairs per output, without repetition.
    Random,
    /// Pairs aligned along truncated diagonals `j = (l - i) mod N`, with the
    /// window of `i` values starting at a seeded random offset per output.
    StructuredDiagonal,
    /// The block-code tensor: full within-block diagonals, i.e. the
    /// coincidence structure of block-wise circular convolution.
    BlockDiagonal { n_blocks: usize },
}

/// Compact description of a sampling tensor; regeneration is bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub dim: usize,
    pub fan_in: usize,
    pub mode: TensorMode,
    pub symmetric: bool,
    pub seed: u64,
}

/// Sparse binary third-order tensor `W^l_{ij}` selecting tensor-product
/// coincidences per output component.
///
/// For each output `l` the stored pair list holds the `(i, j)` coincidences
/// feeding it. With `symmetric`, the construction closes every entry under
/// the orbit `(l;i,j) -> (i;j,l) -> (j;l,i)`, so `W^i_{jl} = W^l_{ij}` holds
/// for every stored entry; per-output fan-in may then exceed the target by a
/// small margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingTensor {
    spec: TensorSpec,
    pairs: Vec<Vec<(u32, u32)>>,
}

impl SamplingTensor {
    pub fn build(
        dim: usize,
        fan_in: usize,
        mode: TensorMode,
        symmetric: bool,
        seed: u64,
    ) -> Result<Self> {
        Self::from_spec(TensorSpec { dim, fan_in, mode, symmetric, seed })
    }

    pub fn from_spec(spec: TensorSpec) -> Result<Self> {
        let TensorSpec { dim: n, fan_in, mode, symmetric, seed } = spec;
        if n == 0 {
            return Err(VsaError::InvalidParameter("tensor dimension 0".into()));
        }
        let slots = match mode {
            TensorMode::Random => n * n,
            TensorMode::StructuredDiagonal => n,
            TensorMode::BlockDiagonal { n_blocks } => {
                if n_blocks == 0 || n % n_blocks != 0 {
                    return Err(VsaError::BlockMismatch { n, k: n_blocks });
                }
                n / n_blocks
            }
        };
        if fan_in == 0 || fan_in > slots {
            return Err(VsaError::InvalidParameter(format!(
                "fan-in {fan_in} outside available slots 1..={slots}"
            )));
        }
        let pairs = match (mode, symmetric) {
            (TensorMode::BlockDiagonal { n_blocks }, false) => {
                Self::build_block_diagonal(n, n_blocks, fan_in)?
            }
            (TensorMode::BlockDiagonal { .. }, true) => {
                return Err(VsaError::InvalidParameter(
                    "block-diagonal tensors do not support symmetrization".into(),
                ))
            }
            (_, false) => Self::build_plain(n, fan_in, mode, seed),
            (_, true) => Self::build_symmetric(n, fan_in, mode, seed)?,
        };
        Ok(Self { spec, pairs })
    }

    /// Non-symmetric tensor whose per-output fan-in is the floor or ceiling
    /// of a real-valued target: the ceiling is drawn at rate `frac(alpha)`,
    /// so the mean fan-in equals `alpha` exactly. Used when the calibration
    /// yields a fractional fan-in and rounding up would bias the output
    /// density. The stored spec records the ceiling fan-in, so rebuilding
    /// from the spec does not reproduce a fractional tensor.
    pub fn build_real_fanin(dim: usize, alpha: f64, mode: TensorMode, seed: u64) -> Result<Self> {
        if matches!(mode, TensorMode::BlockDiagonal { .. }) {
            return Err(VsaError::InvalidParameter(
                "fractional fan-in is not defined for block-diagonal tensors".into(),
            ));
        }
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(VsaError::InvalidParameter(format!("fan-in {alpha} must be >= 1")));
        }
        let ceil = alpha.ceil() as usize;
        let base = Self::build(dim, ceil, mode, false, seed)?;
        let frac = alpha - alpha.floor();
        if frac == 0.0 {
            return Ok(base);
        }
        let mut pairs = base.pairs;
        let keep_seed = rng::child_seed(seed, u64::MAX);
        for (l, out) in pairs.iter_mut().enumerate() {
            let mut r = rng::substream(keep_seed, l as u64);
            if r.random::<f64>() >= frac {
                out.remove(r.random_range(0..out.len()));
            }
        }
        Ok(Self { spec: base.spec, pairs })
    }

    fn build_plain(n: usize, fan_in: usize, mode: TensorMode, seed: u64) -> Vec<Vec<(u32, u32)>> {
        (0..n)
            .map(|l| {
                let mut rng = rng::substream(seed, l as u64);
                let mut out: Vec<(u32, u32)> = match mode {
                    TensorMode::Random => index::sample(&mut rng, n * n, fan_in)
                        .into_iter()
                        .map(|flat| ((flat / n) as u32, (flat % n) as u32))
                        .collect(),
                    TensorMode::StructuredDiagonal => {
                        let offset = rng.random_range(0..n);
                        (0..fan_in)
                            .map(|t| {
                                let i = (offset + t) % n;
                                let j = (l + n - i % n) % n;
                                (i as u32, j as u32)
                            })
                            .collect()
                    }
                    TensorMode::BlockDiagonal { .. } => unreachable!(),
                };
                out.sort_unstable();
                out
            })
            .collect()
    }

    fn build_block_diagonal(n: usize, n_blocks: usize, fan_in: usize) -> Result<Vec<Vec<(u32, u32)>>> {
        let lb = n / n_blocks;
        if fan_in != lb {
            return Err(VsaError::InvalidParameter(format!(
                "block-diagonal fan-in must equal block size {lb}"
            )));
        }
        Ok((0..n)
            .map(|l| {
                let block = l / lb;
                let lo = l % lb;
                (0..lb)
                    .map(|i| {
                        let j = (lo + lb - i) % lb;
                        (((block * lb) + i) as u32, ((block * lb) + j) as u32)
                    })
                    .collect()
            })
            .collect())
    }

    fn build_symmetric(
        n: usize,
        fan_in: usize,
        mode: TensorMode,
        seed: u64,
    ) -> Result<Vec<Vec<(u32, u32)>>> {
        let mut sets: Vec<HashSet<(u32, u32)>> = vec![HashSet::new(); n];
        let mut rng = rng::stream(seed);
        let max_attempts = n.saturating_mul(fan_in).saturating_mul(64);
        let mut attempts = 0usize;
        loop {
            let mut pending = false;
            for l in 0..n {
                if sets[l].len() >= fan_in {
                    continue;
                }
                pending = true;
                attempts += 1;
                if attempts > max_attempts {
                    return Err(VsaError::Numerical(
                        "symmetric tensor construction did not converge".into(),
                    ));
                }
                let (i, j) = match mode {
                    TensorMode::Random => {
                        (rng.random_range(0..n), rng.random_range(0..n))
                    }
                    TensorMode::StructuredDiagonal => {
                        let i = rng.random_range(0..n);
                        (i, (l + n - i) % n)
                    }
                    TensorMode::BlockDiagonal { .. } => unreachable!(),
                };
                // Close the candidate under the symmetry orbit.
                let orbit = [
                    (l, (i as u32, j as u32)),
                    (i, (j as u32, l as u32)),
                    (j, (l as u32, i as u32)),
                ];
                for (out, pair) in orbit {
                    sets[out].insert(pair);
                }
            }
            if !pending {
                break;
            }
        }
        Ok(sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<(u32, u32)> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect())
    }

    pub fn spec(&self) -> TensorSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Coincidence pairs feeding output `l`.
    pub fn pairs(&self, l: usize) -> &[(u32, u32)] {
        &self.pairs[l]
    }

    /// (min, max, mean) per-output fan-in. Symmetrized construction may
    /// deviate from the target by a couple of entries.
    pub fn fan_in_stats(&self) -> (usize, usize, f64) {
        let mut min = usize::MAX;
        let mut max = 0;
        let mut sum = 0usize;
        for p in &self.pairs {
            min = min.min(p.len());
            max = max.max(p.len());
            sum += p.len();
        }
        (min, max, sum as f64 / self.pairs.len() as f64)
    }

    /// True iff `(i; j, l)` is stored whenever `(l; i, j)` is.
    pub fn is_orbit_closed(&self) -> bool {
        self.pairs.iter().enumerate().all(|(l, plist)| {
            plist.iter().all(|&(i, j)| {
                self.pairs[i as usize]
                    .binary_search(&(j, l as u32))
                    .is_ok()
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_mode_has_exact_fan_in() {
        let w = SamplingTensor::build(256, 16, TensorMode::Random, false, 5).unwrap();
        let (min, max, mean) = w.fan_in_stats();
        assert_eq!((min, max), (16, 16));
        assert_eq!(mean, 16.0);
        // Pairs are unique per output.
        for l in 0..256 {
            let p = w.pairs(l);
            assert!(p.windows(2).all(|w| w[0] != w[1]));
        }
    }

    #[test]
    fn full_structured_diagonals_give_convolution_tensor() {
        let n = 16;
        let w = SamplingTensor::build(n, n, TensorMode::StructuredDiagonal, false, 1).unwrap();
        for l in 0..n {
            let p = w.pairs(l);
            assert_eq!(p.len(), n);
            for &(i, j) in p {
                assert_eq!((i as usize + j as usize) % n, l);
            }
        }
    }

    #[test]
    fn symmetric_construction_is_orbit_closed() {
        let w = SamplingTensor::build(128, 8, TensorMode::Random, true, 9).unwrap();
        assert!(w.is_orbit_closed());
        let (min, _, mean) = w.fan_in_stats();
        assert!(min >= 8);
        assert!(mean < 8.0 + 3.0, "mean fan-in {mean}");
    }

    #[test]
    fn block_diagonal_matches_lcc_structure() {
        let w = SamplingTensor::build(16, 4, TensorMode::BlockDiagonal { n_blocks: 4 }, false, 0)
            .unwrap();
        for l in 0..16 {
            let block = l / 4;
            for &(i, j) in w.pairs(l) {
                assert_eq!(i as usize / 4, block);
                assert_eq!(j as usize / 4, block);
                assert_eq!((i as usize % 4 + j as usize % 4) % 4, l % 4);
            }
        }
    }

    #[test]
    fn regeneration_is_identical_and_bounds_checked() {
        let w = SamplingTensor::build(64, 4, TensorMode::Random, true, 2).unwrap();
        assert_eq!(w, SamplingTensor::from_spec(w.spec()).unwrap());
        assert!(SamplingTensor::build(8, 65, TensorMode::Random, false, 0).is_err());
        assert!(SamplingTensor::build(8, 9, TensorMode::StructuredDiagonal, false, 0).is_err());
    }
}
