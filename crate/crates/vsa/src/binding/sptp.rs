use num_complex::Complex64;

use crate::binding::SamplingTensor;
use crate::core::{SparseKind, SparseVector};
use crate::error::{Result, VsaError};

fn check(a: &SparseVector, b: &SparseVector, w: &SamplingTensor) -> Result<()> {
    if a.dim != b.dim {
        return Err(VsaError::DimensionMismatch { left: a.dim, right: b.dim });
    }
    if a.dim != w.dim() {
        return Err(VsaError::DimensionMismatch { left: a.dim, right: w.dim() });
    }
    Ok(())
}

/// Sparsity-preserving tensor projection for binary sparse vectors:
/// `out_l = 1` iff the number of sampled coincidences `(i, j)` with both
/// `a_i` and `b_j` active reaches the threshold.
pub fn sptp_bind(
    a: &SparseVector,
    b: &SparseVector,
    w: &SamplingTensor,
    theta: u32,
) -> Result<SparseVector> {
    check(a, b, w)?;
    if theta == 0 {
        return Err(VsaError::InvalidParameter("binary SPTP threshold must be >= 1".into()));
    }
    let ma = a.mask();
    let mb = b.mask();
    let one = Complex64::new(1.0, 0.0);
    let mut support = Vec::new();
    for l in 0..w.dim() {
        let mut count = 0u32;
        for &(i, j) in w.pairs(l) {
            if ma[i as usize] && mb[j as usize] {
                count += 1;
                if count >= theta {
                    break;
                }
            }
        }
        if count >= theta {
            support.push((l, one));
        }
    }
    SparseVector::new(a.dim, SparseKind::Binary, support)
}

/// Approximate SPTP unbinding: recover the first factor from the bound
/// vector and the second factor. With a symmetric tensor this reuses the
/// bind circuit with the roles `(b, c)` on the input slots.
pub fn sptp_unbind(
    c: &SparseVector,
    b: &SparseVector,
    w: &SamplingTensor,
    theta: u32,
) -> Result<SparseVector> {
    sptp_bind(b, c, w, theta)
}

/// Phasor SPTP: `z_l = sum W^l_{ij} a_i b_j`, output `z_l / |z_l|` where
/// `|z_l|` reaches the threshold, zero elsewhere.
pub fn sptp_bind_phasor(
    a: &SparseVector,
    b: &SparseVector,
    w: &SamplingTensor,
    theta: f64,
) -> Result<SparseVector> {
    check(a, b, w)?;
    let da = a.to_dense();
    let db = b.to_dense();
    let mut support = Vec::new();
    for l in 0..w.dim() {
        let mut z = Complex64::ZERO;
        for &(i, j) in w.pairs(l) {
            let ai = da[i as usize];
            let bj = db[j as usize];
            if ai != Complex64::ZERO && bj != Complex64::ZERO {
                z += ai * bj;
            }
        }
        let mag = z.norm();
        if mag >= theta && mag > 0.0 {
            support.push((l, z / mag));
        }
    }
    SparseVector::new(a.dim, SparseKind::Phasor, support)
}

/// Phasor unbinding: bind the conjugated second factor with the bound vector.
pub fn sptp_unbind_phasor(
    c: &SparseVector,
    b: &SparseVector,
    w: &SamplingTensor,
    theta: f64,
) -> Result<SparseVector> {
    let b_conj = SparseVector::new(
        b.dim,
        b.kind,
        b.support.iter().map(|&(i, v)| (i, v.conj())).collect(),
    )?;
    sptp_bind_phasor(&b_conj, c, w, theta)
}
