use nalgebra::DMatrix;
use rand::seq::index;

use crate::cs::{Dictionary, SamplingMatrix};
use crate::error::{Result, VsaError};
use crate::rng;

/// Evidence gathered when probing whether a dictionary has spark larger than
/// `2K` (i.e. every set of `2K` columns is linearly independent, so
/// `K`-sparse representations are unique).
#[derive(Debug, Clone)]
pub struct SparkReport {
    /// Number of columns per probed subset (2K + 1).
    pub subset_size: usize,
    pub subsets_probed: usize,
    /// Smallest singular value seen over all probed subsets.
    pub min_singular_value: f64,
    /// True when no probed subset was numerically rank-deficient.
    pub no_dependence_found: bool,
}

const RANK_TOLERANCE: f64 = 1e-8;

/// Probe random column subsets of size `2k + 1` and report the smallest
/// singular value observed. A value far from zero is evidence (not proof)
/// that the spark exceeds `2k`; a near-zero value is a concrete witness of
/// a linear dependence.
pub fn spark_witness(
    dict: &impl Dictionary,
    k: usize,
    n_subsets: usize,
    seed: u64,
) -> Result<SparkReport> {
    let subset_size = 2 * k + 1;
    if k == 0 || n_subsets == 0 {
        return Err(VsaError::InvalidParameter("k and n_subsets must be positive".into()));
    }
    if subset_size > dict.n_cols() || subset_size > dict.n_rows() {
        return Err(VsaError::InvalidParameter(
            "subset size exceeds the dictionary dimensions".into(),
        ));
    }
    let n = dict.n_rows();
    let mut min_sv = f64::INFINITY;
    let mut col = vec![0.0; n];
    for s in 0..n_subsets {
        let mut r = rng::substream(seed, s as u64);
        let picks = index::sample(&mut r, dict.n_cols(), subset_size);
        let mut sub = DMatrix::zeros(n, subset_size);
        for (c, idx) in picks.iter().enumerate() {
            dict.column_into(idx, &mut col);
            for (row, &v) in col.iter().enumerate() {
                sub[(row, c)] = v;
            }
        }
        let svals = sub.singular_values();
        let smallest = svals.iter().copied().fold(f64::INFINITY, f64::min);
        min_sv = min_sv.min(smallest);
    }
    Ok(SparkReport {
        subset_size,
        subsets_probed: n_subsets,
        min_singular_value: min_sv,
        no_dependence_found: min_sv > RANK_TOLERANCE,
    })
}

/// Append a column that is a linear combination of `degree` existing
/// columns, forcing the spark down to at most `degree + 1`. Returns the new
/// matrix and the index of the planted column.
pub fn plant_null_column(
    xi: &SamplingMatrix,
    degree: usize,
    seed: u64,
) -> Result<(SamplingMatrix, usize)> {
    if degree == 0 || degree > xi.n_cols {
        return Err(VsaError::InvalidParameter("degree must be in 1..=n_cols".into()));
    }
    let mut r = rng::stream(seed);
    let picks = index::sample(&mut r, xi.n_cols, degree);
    let mut planted = vec![0.0; xi.n_rows];
    for idx in picks.iter() {
        for (p, v) in planted.iter_mut().zip(xi.column(idx)) {
            *p += v / degree as f64;
        }
    }
    let mut cols: Vec<Vec<f64>> = (0..xi.n_cols).map(|c| xi.column(c)).collect();
    cols.push(planted);
    let new = SamplingMatrix::from_columns(&cols)?;
    Ok((new, xi.n_cols))
}

/// L0 norm of the coefficient vector `vec(a b^T - a' b'^T)` for one-hot
/// factors sharing a dictionary: the difference of two bound pairs touches
/// at most `2 * k_factor` columns per factor atom. Structural bound used to
/// relate pairwise-bound null vectors back to factor sparsity.
pub fn outer_diff_column_l0(
    a: &[(usize, f64)],
    b: &[(usize, f64)],
    a2: &[(usize, f64)],
    b2: &[(usize, f64)],
    factor_cols: usize,
) -> usize {
    let mut support = std::collections::BTreeMap::new();
    for &(l, av) in a {
        for &(k, bv) in b {
            *support.entry(l * factor_cols + k).or_insert(0.0) += av * bv;
        }
    }
    for &(l, av) in a2 {
        for &(k, bv) in b2 {
            *support.entry(l * factor_cols + k).or_insert(0.0) -= av * bv;
        }
    }
    support.values().filter(|v| v.abs() > 1e-12).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_wide_matrix_passes_witness() {
        let xi = SamplingMatrix::random_bipolar(200, 400, 3).unit_columns();
        let report = spark_witness(&xi, 5, 200, 7).unwrap();
        assert!(report.no_dependence_found, "min sv = {}", report.min_singular_value);
        assert_eq!(report.subset_size, 11);
    }

    #[test]
    fn planted_dependence_is_detected_by_exhaustive_probing() {
        // Small enough that random subsets almost surely hit the planted
        // column together with its generators.
        let xi = SamplingMatrix::random_bipolar(64, 8, 5);
        let (planted, idx) = plant_null_column(&xi, 3, 11).unwrap();
        assert_eq!(idx, 8);
        // Subsets of size 9 from 9 columns always contain the dependence.
        let report = spark_witness(&planted, 4, 5, 13).unwrap();
        assert!(!report.no_dependence_found, "min sv = {}", report.min_singular_value);
    }

    #[test]
    fn outer_diff_support_is_bounded_by_structure() {
        // Factors with k hot entries each: the difference of two bound
        // pairs has L0 at most 2k^2, and exactly 2k when one factor is
        // shared and the other differs entirely.
        let k = 3;
        let a: Vec<(usize, f64)> = (0..k).map(|i| (i * 4, 1.0)).collect();
        let b: Vec<(usize, f64)> = (0..k).map(|i| (i * 5, 1.0)).collect();
        let b2: Vec<(usize, f64)> = (0..k).map(|i| (i * 5 + 1, 1.0)).collect();
        let l0 = outer_diff_column_l0(&a, &b, &a, &b2, 64);
        assert_eq!(l0, 2 * k * k);
        // Identical pairs cancel exactly.
        assert_eq!(outer_diff_column_l0(&a, &b, &a, &b, 64), 0);
    }

    #[test]
    fn witness_rejects_oversized_subsets() {
        let xi = SamplingMatrix::random_bipolar(16, 20, 1);
        assert!(spark_witness(&xi, 10, 5, 1).is_err());
    }
}
