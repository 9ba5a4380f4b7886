use rand::Rng;

use crate::error::{Result, VsaError};
use crate::rng;

/// Column-indexed real dictionary. Columns may be materialized or computed
/// lazily (box-dot constructions).
pub trait Dictionary {
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    fn column_into(&self, idx: usize, out: &mut [f64]);

    fn column(&self, idx: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows()];
        self.column_into(idx, &mut out);
        out
    }

    /// Matrix-sparse-vector product evaluated over the support only.
    fn compress(&self, support: &[(usize, f64)]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows()];
        let mut col = vec![0.0; self.n_rows()];
        for &(idx, v) in support {
            self.column_into(idx, &mut col);
            for (o, c) in out.iter_mut().zip(&col) {
                *o += v * c;
            }
        }
        out
    }
}

/// N x M random sampling matrix with bipolar +-1 entries, optionally scaled.
/// Column `i` is generated from the child seed `(seed, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub seed: u64,
    pub scale: f64,
    data: Vec<f64>, // column-major, unscaled +-1 entries
}

impl SamplingMatrix {
    pub fn random_bipolar(n_rows: usize, n_cols: usize, seed: u64) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for col in 0..n_cols {
            let mut r = rng::substream(seed, col as u64);
            data.extend((0..n_rows).map(|_| if r.random::<bool>() { 1.0 } else { -1.0 }));
        }
        Self { n_rows, n_cols, seed, scale: 1.0, data }
    }

    /// Build a matrix from explicit columns (controls and planted
    /// constructions in tests). All columns must share one length.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n_rows = columns
            .first()
            .ok_or_else(|| VsaError::EmptyInput("from_columns needs at least one column".into()))?
            .len();
        let mut data = Vec::with_capacity(n_rows * columns.len());
        for col in columns {
            if col.len() != n_rows {
                return Err(VsaError::DimensionMismatch { left: n_rows, right: col.len() });
            }
            data.extend_from_slice(col);
        }
        Ok(Self { n_rows, n_cols: columns.len(), seed: 0, scale: 1.0, data })
    }

    /// Same matrix with columns scaled to unit norm (1/sqrt(N)).
    pub fn unit_columns(mut self) -> Self {
        self.scale = 1.0 / (self.n_rows as f64).sqrt();
        self
    }

    pub fn raw_column(&self, idx: usize) -> &[f64] {
        &self.data[idx * self.n_rows..(idx + 1) * self.n_rows]
    }

    /// Dense product with a full coefficient vector.
    pub fn matvec(&self, a: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.n_cols {
            return Err(VsaError::DimensionMismatch { left: self.n_cols, right: a.len() });
        }
        let mut out = vec![0.0; self.n_rows];
        for (idx, &v) in a.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(self.raw_column(idx)) {
                *o += v * c * self.scale;
            }
        }
        Ok(out)
    }

    /// Transpose product `A^T x` (scaled).
    pub fn tr_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_rows {
            return Err(VsaError::DimensionMismatch { left: self.n_rows, right: x.len() });
        }
        Ok((0..self.n_cols)
            .map(|idx| {
                self.raw_column(idx)
                    .iter()
                    .zip(x)
                    .map(|(c, xi)| c * xi)
                    .sum::<f64>()
                    * self.scale
            })
            .collect())
    }
}

impl Dictionary for SamplingMatrix {
    fn n_rows(&self) -> usize {
        self.n_rows
    }

    fn n_cols(&self) -> usize {
        self.n_cols
    }

    fn column_into(&self, idx: usize, out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(self.raw_column(idx)) {
            *o = c * self.scale;
        }
    }
}

/// Lazy box-dot dictionary: column `(l, k)` (flat index `l * M_psi + k`,
/// row-major in `l`) is the component-wise product of the `l`-th column of
/// `phi` and the `k`-th column of `psi`.
pub struct BoxDot<'a> {
    pub phi: &'a SamplingMatrix,
    pub psi: &'a SamplingMatrix,
    pub scale: f64,
}

impl<'a> BoxDot<'a> {
    pub fn new(phi: &'a SamplingMatrix, psi: &'a SamplingMatrix) -> Result<Self> {
        if phi.n_rows != psi.n_rows {
            return Err(VsaError::DimensionMismatch { left: phi.n_rows, right: psi.n_rows });
        }
        Ok(Self { phi, psi, scale: 1.0 })
    }

    pub fn unit_columns(mut self) -> Self {
        self.scale = 1.0 / (self.phi.n_rows as f64).sqrt();
        self
    }

    pub fn flat_index(&self, l: usize, k: usize) -> usize {
        l * self.psi.n_cols + k
    }
}

impl Dictionary for BoxDot<'_> {
    fn n_rows(&self) -> usize {
        self.phi.n_rows
    }

    fn n_cols(&self) -> usize {
        self.phi.n_cols * self.psi.n_cols
    }

    fn column_into(&self, idx: usize, out: &mut [f64]) {
        let l = idx / self.psi.n_cols;
        let k = idx % self.psi.n_cols;
        for ((o, a), b) in out
            .iter_mut()
            .zip(self.phi.raw_column(l))
            .zip(self.psi.raw_column(k))
        {
            *o = a * b * self.scale;
        }
    }
}

/// Dictionary of a protected sum of `n_objects` feature sets: column
/// `(j, i)` (flat index `j * M + i`) is the `j`-th key column of `keys`
/// times the `i`-th column of `phi`. Shape N x (M * L).
pub struct ProtectedSumDict<'a> {
    pub phi: &'a SamplingMatrix,
    pub keys: &'a SamplingMatrix,
    pub n_objects: usize,
    pub scale: f64,
}

impl<'a> ProtectedSumDict<'a> {
    pub fn new(phi: &'a SamplingMatrix, keys: &'a SamplingMatrix, n_objects: usize) -> Result<Self> {
        if phi.n_rows != keys.n_rows {
            return Err(VsaError::DimensionMismatch { left: phi.n_rows, right: keys.n_rows });
        }
        if n_objects > keys.n_cols {
            return Err(VsaError::InvalidParameter(format!(
                "{n_objects} objects but only {} keys",
                keys.n_cols
            )));
        }
        Ok(Self { phi, keys, n_objects, scale: 1.0 })
    }

    pub fn unit_columns(mut self) -> Self {
        self.scale = 1.0 / (self.phi.n_rows as f64).sqrt();
        self
    }
}

impl Dictionary for ProtectedSumDict<'_> {
    fn n_rows(&self) -> usize {
        self.phi.n_rows
    }

    fn n_cols(&self) -> usize {
        self.phi.n_cols * self.n_objects
    }

    fn column_into(&self, idx: usize, out: &mut [f64]) {
        let j = idx / self.phi.n_cols;
        let i = idx % self.phi.n_cols;
        for ((o, a), b) in out
            .iter_mut()
            .zip(self.keys.raw_column(j))
            .zip(self.phi.raw_column(i))
        {
            *o = a * b * self.scale;
        }
    }
}
