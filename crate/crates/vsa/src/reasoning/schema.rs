use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::binding::{lcc_bind, lcc_bind_dense, lcc_inverse_dense};
use crate::core::{BlockKind, CodeKind, Codebook};
use crate::error::{Result, VsaError};
use crate::rng;

/// One role's filler alphabet: names aligned with the codebook columns.
#[derive(Debug, Clone)]
pub struct FillerBook {
    pub names: Vec<String>,
    pub codebook: Codebook,
}

/// R named roles with a role codebook (N x R) and one filler codebook per
/// role, all block-codes with a shared (N, K).
#[derive(Debug, Clone)]
pub struct RoleSchema {
    n: usize,
    k: usize,
    kind: BlockKind,
    role_names: Vec<String>,
    roles: Codebook,
    fillers: Vec<FillerBook>,
}

fn code_kind(kind: BlockKind, k: usize) -> CodeKind {
    match kind {
        BlockKind::Binary => CodeKind::BlockBinary { k },
        BlockKind::Phasor => CodeKind::BlockPhasor { k },
    }
}

impl RoleSchema {
    /// Schema with explicit role and filler names. Role codebook comes from
    /// child seed 0, the filler book for role r from child seed r + 1.
    pub fn named(
        n: usize,
        k: usize,
        kind: BlockKind,
        role_names: Vec<String>,
        filler_names: Vec<Vec<String>>,
        seed: u64,
    ) -> Result<Self> {
        if role_names.len() != filler_names.len() {
            return Err(VsaError::DimensionMismatch {
                left: role_names.len(),
                right: filler_names.len(),
            });
        }
        if role_names.is_empty() {
            return Err(VsaError::EmptyInput("schema needs at least one role".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &role_names {
            if !seen.insert(name.clone()) {
                return Err(VsaError::InvalidParameter(format!("duplicate role name {name}")));
            }
        }
        let roles = Codebook::generate(n, role_names.len(), code_kind(kind, k), rng::child_seed(seed, 0))?;
        let mut fillers = Vec::with_capacity(filler_names.len());
        for (r, names) in filler_names.into_iter().enumerate() {
            if names.is_empty() {
                return Err(VsaError::EmptyInput(format!("role {} has no fillers", role_names[r])));
            }
            let mut seen = std::collections::BTreeSet::new();
            for name in &names {
                if !seen.insert(name.clone()) {
                    return Err(VsaError::InvalidParameter(format!(
                        "duplicate filler name {name} for role {}",
                        role_names[r]
                    )));
                }
            }
            let codebook =
                Codebook::generate(n, names.len(), code_kind(kind, k), rng::child_seed(seed, r as u64 + 1))?;
            fillers.push(FillerBook { names, codebook });
        }
        Ok(Self { n, k, kind, role_names, roles, fillers })
    }

    /// Schema with generated names: `r` roles, `m` fillers each.
    pub fn random(n: usize, k: usize, kind: BlockKind, r: usize, m: usize, seed: u64) -> Result<Self> {
        let role_names = (0..r).map(|i| format!("role{i}")).collect();
        let filler_names = (0..r)
            .map(|ri| (0..m).map(|fi| format!("filler{ri}_{fi}")).collect())
            .collect();
        Self::named(n, k, kind, role_names, filler_names, seed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn n_roles(&self) -> usize {
        self.role_names.len()
    }

    pub fn role_names(&self) -> &[String] {
        &self.role_names
    }

    pub fn role_index(&self, name: &str) -> Option<usize> {
        self.role_names.iter().position(|n| n == name)
    }

    pub fn roles(&self) -> &Codebook {
        &self.roles
    }

    pub fn fillers(&self, role: usize) -> &FillerBook {
        &self.fillers[role]
    }

    pub fn filler_index(&self, role: usize, name: &str) -> Option<usize> {
        self.fillers[role].names.iter().position(|n| n == name)
    }
}

/// A superposition of role-filler bound pairs, kept unnormalized.
#[derive(Debug, Clone)]
pub struct RecordVector {
    pub accumulator: Vec<Complex64>,
    /// Filler index chosen for each role, in role order.
    pub assignment: Vec<usize>,
}

/// Bind each role key with its assigned filler and superpose. The
/// accumulator stays complex-valued; it is not re-sparsified.
pub fn encode_record(schema: &RoleSchema, assignment: &[usize]) -> Result<RecordVector> {
    if assignment.len() != schema.n_roles() {
        return Err(VsaError::DimensionMismatch {
            left: schema.n_roles(),
            right: assignment.len(),
        });
    }
    let mut acc = vec![Complex64::ZERO; schema.n()];
    for (r, &f) in assignment.iter().enumerate() {
        let book = schema.fillers(r);
        if f >= book.names.len() {
            return Err(VsaError::InvalidParameter(format!(
                "filler index {f} out of range for role {}",
                schema.role_names()[r]
            )));
        }
        let bound = lcc_bind(&schema.roles().block_column(r)?, &book.codebook.block_column(f)?)?;
        for (a, v) in acc.iter_mut().zip(bound.to_dense()) {
            *a += v;
        }
    }
    Ok(RecordVector { accumulator: acc, assignment: assignment.to_vec() })
}

/// Name-addressed encoding; the assignment must cover every role.
pub fn encode_record_named(
    schema: &RoleSchema,
    assignment: &BTreeMap<String, String>,
) -> Result<RecordVector> {
    let mut indices = Vec::with_capacity(schema.n_roles());
    for (r, role) in schema.role_names().iter().enumerate() {
        let filler = assignment
            .get(role)
            .ok_or_else(|| VsaError::InvalidParameter(format!("missing role {role}")))?;
        let idx = schema
            .filler_index(r, filler)
            .ok_or_else(|| VsaError::InvalidParameter(format!("unknown filler {filler} for role {role}")))?;
        indices.push(idx);
    }
    encode_record(schema, &indices)
}

/// Binding of a target record with the blockwise inverse of a source
/// record; maps the source's fillers onto the target's.
#[derive(Debug, Clone)]
pub struct TransformVector {
    pub accumulator: Vec<Complex64>,
    pub source_assignment: Vec<usize>,
    pub target_assignment: Vec<usize>,
}

/// `t = rec_target bound with rec_source^{-1}` via dense per-block circular
/// convolution against the blockwise spectral conjugate of the source.
pub fn make_transform(
    schema: &RoleSchema,
    source: &RecordVector,
    target: &RecordVector,
) -> Result<TransformVector> {
    if source.accumulator.len() != schema.n() || target.accumulator.len() != schema.n() {
        return Err(VsaError::DimensionMismatch {
            left: schema.n(),
            right: source.accumulator.len().min(target.accumulator.len()),
        });
    }
    let inv = lcc_inverse_dense(&source.accumulator, schema.k())?;
    let acc = lcc_bind_dense(&target.accumulator, &inv, schema.k())?;
    Ok(TransformVector {
        accumulator: acc,
        source_assignment: source.assignment.clone(),
        target_assignment: target.assignment.clone(),
    })
}

/// Bind the probe through the transform and score every codebook column,
/// highest first (ties broken toward the lower index).
pub fn query(
    schema: &RoleSchema,
    transform: &TransformVector,
    probe: &[Complex64],
    codebook: &Codebook,
) -> Result<Vec<(usize, f64)>> {
    if codebook.n_cols() == 0 {
        return Err(VsaError::EmptyInput("empty answer codebook".into()));
    }
    let answer = lcc_bind_dense(&transform.accumulator, probe, schema.k())?;
    let mut scores: Vec<(usize, f64)> = (0..codebook.n_cols())
        .map(|i| {
            let s: Complex64 = answer
                .iter()
                .zip(codebook.column(i))
                .map(|(a, c)| a * c.conj())
                .sum();
            (i, s.re)
        })
        .collect();
    scores.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(scores)
}
