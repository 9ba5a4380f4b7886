use num_complex::Complex64;
use rand::seq::SliceRandom;

use crate::core::Accumulator;
use crate::error::{Result, VsaError};
use crate::rng;

/// A random permutation of `[0, N)` used for permutation-protected sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { mapping: (0..n).collect() }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.shuffle(&mut rng::stream(seed));
        Self { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// Applies the permutation: `out[mapping[i]] = v[i]`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.mapping.len() {
            return Err(VsaError::DimensionMismatch { left: self.mapping.len(), right: v.len() });
        }
        let mut out = vec![Complex64::ZERO; v.len()];
        for (i, &target) in self.mapping.iter().enumerate() {
            out[target] = v[i];
        }
        Ok(out)
    }

    /// Applies the `e`-th power of the permutation; power 0 is the identity.
    pub fn apply_power(&self, v: &[Complex64], e: usize) -> Result<Vec<Complex64>> {
        let mut out = v.to_vec();
        for _ in 0..e {
            out = self.apply(&out)?;
        }
        Ok(out)
    }
}

/// Protected sum `sum_j keys_j (x) vectors_j` (component-wise product with
/// each key). Requires one key per vector.
pub fn protected_sum(vectors: &[&[Complex64]], keys: &[&[Complex64]]) -> Result<Accumulator> {
    if vectors.is_empty() {
        return Err(VsaError::EmptyInput("protected sum of no vectors".into()));
    }
    if keys.len() < vectors.len() {
        return Err(VsaError::InvalidParameter(format!(
            "{} keys for {} vectors",
            keys.len(),
            vectors.len()
        )));
    }
    let n = vectors[0].len();
    let mut acc = Accumulator::zero(n);
    for (x, key) in vectors.iter().zip(keys) {
        if x.len() != n || key.len() != n {
            return Err(VsaError::DimensionMismatch { left: n, right: x.len().max(key.len()) });
        }
        for ((a, xi), ki) in acc.components.iter_mut().zip(*x).zip(*key) {
            *a += xi * ki;
        }
    }
    Ok(acc)
}

/// Permutation-protected sum `sum_j P^j vectors_j` (0-based powers, so the
/// first element is unpermuted).
pub fn permute_protect(vectors: &[&[Complex64]], p: &Permutation) -> Result<Accumulator> {
    if vectors.is_empty() {
        return Err(VsaError::EmptyInput("protected sum of no vectors".into()));
    }
    let n = vectors[0].len();
    let mut acc = Accumulator::zero(n);
    let mut permuted: Vec<Complex64>;
    for (j, x) in vectors.iter().enumerate() {
        permuted = p.apply_power(x, j)?;
        acc.add_slice(&permuted)?;
    }
    Ok(acc)
}

/// Component-wise clipping to `[-kappa, kappa]`, applied to real parts.
pub fn clip(acc: &Accumulator, kappa: f64) -> Result<Accumulator> {
    if kappa < 1.0 {
        return Err(VsaError::InvalidParameter("kappa must be >= 1".into()));
    }
    Ok(Accumulator::from_components(
        acc.components
            .iter()
            .map(|c| Complex64::new(c.re.clamp(-kappa, kappa), 0.0))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{cleanup, Codebook, CodeKind, DenseKind, DenseVector};

    #[test]
    fn single_element_with_identity_key() {
        let x = DenseVector::random(32, DenseKind::Bipolar, 1).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 32];
        let acc = protected_sum(&[&x.components], &[&ones]).unwrap();
        assert_eq!(acc.components, x.components);
    }

    #[test]
    fn identity_permutation_degenerates_to_plain_sum() {
        let a = DenseVector::random(16, DenseKind::Bipolar, 1).unwrap();
        let b = DenseVector::random(16, DenseKind::Bipolar, 2).unwrap();
        let p = Permutation::identity(16);
        let acc = permute_protect(&[&a.components, &b.components], &p).unwrap();
        for ((s, x), y) in acc.components.iter().zip(&a.components).zip(&b.components) {
            assert_eq!(*s, x + y);
        }
    }

    #[test]
    fn key_shortage_rejected() {
        let x = vec![Complex64::new(1.0, 0.0); 4];
        assert!(protected_sum(&[&x, &x], &[&x]).is_err());
    }

    #[test]
    fn unbind_key_then_cleanup_recovers_item() {
        // N=2048, L=4: unbinding the j-th key and cleaning up against the
        // item codebook recovers item j in at least 95% of 1000 trials.
        let n = 2048;
        let items = Codebook::generate(n, 16, CodeKind::DenseBipolar, 21).unwrap();
        let keys = Codebook::generate(n, 4, CodeKind::DenseBipolar, 22).unwrap();
        let mut hits = 0;
        for t in 0..1000usize {
            let picks: Vec<usize> = (0..4).map(|j| (t * 7 + j * 3) % 16).collect();
            let vectors: Vec<&[Complex64]> = picks.iter().map(|&i| items.column(i)).collect();
            let key_slices: Vec<&[Complex64]> = (0..4).map(|j| keys.column(j)).collect();
            let s = protected_sum(&vectors, &key_slices).unwrap();
            let j = t % 4;
            let key = DenseVector::new(DenseKind::Bipolar, keys.column(j).to_vec()).unwrap();
            // Bipolar keys are self-inverse; unbind by re-multiplying.
            let probe: Vec<Complex64> = s
                .components
                .iter()
                .zip(&key.components)
                .map(|(a, b)| a * b)
                .collect();
            let (hit, _) = cleanup(&probe, items.columns()).unwrap();
            if hit == picks[j] {
                hits += 1;
            }
        }
        assert!(hits >= 950, "hits = {hits}");
    }

    #[test]
    fn clip_examples() {
        let acc = Accumulator::from_components(
            [5.0, -7.0, 2.0].iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        );
        let c = clip(&acc, 3.0).unwrap();
        let re: Vec<f64> = c.components.iter().map(|x| x.re).collect();
        assert_eq!(re, vec![3.0, -3.0, 2.0]);

        // kappa = 1 on an integer accumulator gives a ternary output.
        let c1 = clip(&acc, 1.0).unwrap();
        assert!(c1.components.iter().all(|x| [-1.0, 0.0, 1.0].contains(&x.re)));

        // |input| <= kappa is the identity.
        let small = Accumulator::from_components(vec![Complex64::new(0.5, 0.0)]);
        assert_eq!(clip(&small, 1.0).unwrap().components[0].re, 0.5);

        assert!(clip(&acc, 0.5).is_err());
    }
}
