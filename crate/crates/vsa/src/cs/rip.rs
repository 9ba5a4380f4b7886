use rand::seq::index;
use rand::Rng;

use crate::cs::{compress, Dictionary};
use crate::error::{Result, VsaError};
use crate::rng;

/// Family of sparse test vectors used to probe near-isometry of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestVectorShape {
    /// `s` nonzeros at independent uniform positions, +-1 values.
    IidSparse,
    /// Vectorized outer product `vec(a b^T)` of two one-hot-per-factor
    /// selections: the coefficient pattern a bound pair produces on a
    /// box-dot dictionary. `s` must be a perfect square.
    OuterProduct,
    /// Difference of two outer products with a shared left factor; models
    /// the null-vector candidates of a bound-pair dictionary.
    OuterProductDiff,
    /// `s` nonzeros with distinct second-factor (key) columns, each paired
    /// with an independent uniform first-factor column; the coefficient
    /// pattern of a protected sum, which binds every summand to its own key.
    Concatenation,
}

#[derive(Debug, Clone)]
pub struct RipEstimate {
    pub delta: f64,
    pub trials: usize,
    pub sparsity: usize,
    /// Worst-case squared-norm ratio observed (max over trials).
    pub worst_ratio: f64,
    /// Best-case squared-norm ratio observed (min over trials).
    pub best_ratio: f64,
}

/// Draw one sparse coefficient vector of the requested shape.
///
/// `factor_cols` is the number of columns of the second factor for the
/// outer-product shapes (flat index `l * factor_cols + k`).
fn sample_vector(
    shape: TestVectorShape,
    n_cols: usize,
    sparsity: usize,
    factor_cols: usize,
    r: &mut impl Rng,
) -> Result<Vec<(usize, f64)>> {
    let pm1 = |r: &mut dyn rand::RngCore| if r.random::<bool>() { 1.0 } else { -1.0 };
    match shape {
        TestVectorShape::IidSparse => {
            let picks = index::sample(r, n_cols, sparsity);
            let mut support: Vec<(usize, f64)> =
                picks.iter().map(|i| (i, pm1(r))).collect();
            support.sort_unstable_by_key(|&(i, _)| i);
            Ok(support)
        }
        TestVectorShape::OuterProduct => {
            let side = (sparsity as f64).sqrt().round() as usize;
            if side * side != sparsity {
                return Err(VsaError::InvalidParameter(
                    "outer-product shape needs a square sparsity".into(),
                ));
            }
            let n_left = n_cols / factor_cols;
            let ls = index::sample(r, n_left, side);
            let ks = index::sample(r, factor_cols, side);
            let a: Vec<f64> = (0..side).map(|_| pm1(r)).collect();
            let b: Vec<f64> = (0..side).map(|_| pm1(r)).collect();
            let mut support = Vec::with_capacity(sparsity);
            for (li, l) in ls.iter().enumerate() {
                for (ki, k) in ks.iter().enumerate() {
                    support.push((l * factor_cols + k, a[li] * b[ki]));
                }
            }
            support.sort_unstable_by_key(|&(i, _)| i);
            Ok(support)
        }
        TestVectorShape::OuterProductDiff => {
            if sparsity % 2 != 0 {
                return Err(VsaError::InvalidParameter(
                    "outer-product difference needs even sparsity".into(),
                ));
            }
            let half = sparsity / 2;
            let n_left = n_cols / factor_cols;
            let l = r.random_range(0..n_left);
            let picks = index::sample(r, factor_cols, 2 * half);
            let ks: Vec<usize> = picks.iter().collect();
            let mut support = Vec::with_capacity(sparsity);
            for (i, &k) in ks.iter().enumerate() {
                let sign = if i < half { 1.0 } else { -1.0 };
                support.push((l * factor_cols + k, sign));
            }
            support.sort_unstable_by_key(|&(i, _)| i);
            Ok(support)
        }
        TestVectorShape::Concatenation => {
            if factor_cols < sparsity {
                return Err(VsaError::InvalidParameter(
                    "protected-sum shape needs at least `sparsity` key columns".into(),
                ));
            }
            let n_left = n_cols / factor_cols;
            let ks = index::sample(r, factor_cols, sparsity);
            let mut support: Vec<(usize, f64)> = ks
                .iter()
                .map(|k| (r.random_range(0..n_left) * factor_cols + k, pm1(r)))
                .collect();
            support.sort_unstable_by_key(|&(i, _)| i);
            Ok(support)
        }
    }
}

/// Monte-Carlo bound on the restricted isometry constant at sparsity `s`:
/// the largest deviation of `||Xi a||^2 / ||a||^2` from 1 over random sparse
/// test vectors. Columns must already be unit-norm for the ratio to be
/// meaningful. Trial `t` is seeded from the child seed `(seed, t)`, so the
/// estimate is monotone in `trials` for a fixed seed.
pub fn estimate_rip(
    dict: &impl Dictionary,
    sparsity: usize,
    shape: TestVectorShape,
    factor_cols: usize,
    trials: usize,
    seed: u64,
) -> Result<RipEstimate> {
    if sparsity == 0 || trials == 0 {
        return Err(VsaError::InvalidParameter("sparsity and trials must be positive".into()));
    }
    let mut worst = 1.0f64;
    let mut best = 1.0f64;
    let mut delta = 0.0f64;
    for t in 0..trials {
        let mut r = rng::substream(seed, t as u64);
        let support = sample_vector(shape, dict.n_cols(), sparsity, factor_cols, &mut r)?;
        let x = compress(dict, &support)?;
        let num: f64 = x.iter().map(|v| v * v).sum();
        let den: f64 = support.iter().map(|&(_, v)| v * v).sum();
        let ratio = num / den;
        worst = worst.max(ratio);
        best = best.min(ratio);
        delta = delta.max((ratio - 1.0).abs());
    }
    Ok(RipEstimate { delta, trials, sparsity, worst_ratio: worst, best_ratio: best })
}

/// RIP estimate maximized over an ensemble of dictionaries regenerated from
/// child seeds: `make(child_seed(seed, e))` builds ensemble member `e`.
pub fn ensemble_rip<D, F>(
    make: F,
    n_members: usize,
    sparsity: usize,
    shape: TestVectorShape,
    factor_cols: usize,
    trials_per_member: usize,
    seed: u64,
) -> Result<RipEstimate>
where
    D: Dictionary,
    F: Fn(u64) -> D,
{
    if n_members == 0 {
        return Err(VsaError::InvalidParameter("ensemble needs at least one member".into()));
    }
    let mut out: Option<RipEstimate> = None;
    for e in 0..n_members {
        let member_seed = rng::child_seed(seed, e as u64);
        let dict = make(member_seed);
        let est = estimate_rip(
            &dict,
            sparsity,
            shape,
            factor_cols,
            trials_per_member,
            rng::child_seed(member_seed, u64::MAX),
        )?;
        out = Some(match out {
            None => est,
            Some(acc) => RipEstimate {
                delta: acc.delta.max(est.delta),
                trials: acc.trials + est.trials,
                sparsity,
                worst_ratio: acc.worst_ratio.max(est.worst_ratio),
                best_ratio: acc.best_ratio.min(est.best_ratio),
            },
        });
    }
    Ok(out.expect("n_members >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::{BoxDot, SamplingMatrix};

    /// An orthonormal dictionary is an exact isometry: delta must vanish.
    #[test]
    fn orthonormal_dictionary_has_zero_delta() {
        let n = 16;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|c| (0..n).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
            .collect();
        let xi = SamplingMatrix::from_columns(&cols).unwrap();
        let est = estimate_rip(&xi, 4, TestVectorShape::IidSparse, 0, 50, 3).unwrap();
        assert!(est.delta < 1e-12, "delta = {}", est.delta);
    }

    #[test]
    fn random_bipolar_delta_shrinks_with_rows() {
        let small = SamplingMatrix::random_bipolar(64, 256, 5).unit_columns();
        let large = SamplingMatrix::random_bipolar(1024, 256, 5).unit_columns();
        let ds = estimate_rip(&small, 4, TestVectorShape::IidSparse, 0, 200, 9).unwrap();
        let dl = estimate_rip(&large, 4, TestVectorShape::IidSparse, 0, 200, 9).unwrap();
        assert!(dl.delta < ds.delta, "{} !< {}", dl.delta, ds.delta);
        assert!(dl.delta < 0.5);
    }

    #[test]
    fn estimate_is_monotone_in_trials() {
        let xi = SamplingMatrix::random_bipolar(128, 512, 11).unit_columns();
        let a = estimate_rip(&xi, 6, TestVectorShape::IidSparse, 0, 50, 13).unwrap();
        let b = estimate_rip(&xi, 6, TestVectorShape::IidSparse, 0, 200, 13).unwrap();
        assert!(b.delta >= a.delta);
    }

    #[test]
    fn outer_product_shapes_run_on_boxdot() {
        let phi = SamplingMatrix::random_bipolar(256, 20, 21);
        let psi = SamplingMatrix::random_bipolar(256, 20, 22);
        let dict = BoxDot::new(&phi, &psi).unwrap().unit_columns();
        for shape in [TestVectorShape::OuterProduct, TestVectorShape::OuterProductDiff] {
            let est = estimate_rip(&dict, 4, shape, 20, 100, 31).unwrap();
            assert!(est.delta.is_finite() && est.delta > 0.0);
        }
        let est = estimate_rip(&dict, 4, TestVectorShape::Concatenation, 20, 100, 33).unwrap();
        assert!(est.delta.is_finite());
    }

    #[test]
    fn ensemble_dominates_single_member() {
        let make = |s: u64| SamplingMatrix::random_bipolar(64, 128, s).unit_columns();
        let single = estimate_rip(&make(rng::child_seed(17, 0)), 4, TestVectorShape::IidSparse, 0, 50, rng::child_seed(rng::child_seed(17, 0), u64::MAX)).unwrap();
        let ens = ensemble_rip(make, 8, 4, TestVectorShape::IidSparse, 0, 50, 17).unwrap();
        assert!(ens.delta >= single.delta);
        assert_eq!(ens.trials, 8 * 50);
    }

    #[test]
    fn rejects_non_square_sparsity_for_outer_product() {
        let xi = SamplingMatrix::random_bipolar(32, 100, 1).unit_columns();
        let err = estimate_rip(&xi, 5, TestVectorShape::OuterProduct, 10, 10, 1);
        assert!(err.is_err());
    }
}
