use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::core::BlockKind;
use crate::error::{Result, VsaError};
use crate::reasoning::schema::{
    encode_record_named, make_transform, query, RecordVector, RoleSchema,
};

/// Roles, per-role filler alphabets, and named records, loadable from a
/// JSON knowledge file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub roles: Vec<String>,
    pub fillers: BTreeMap<String, Vec<String>>,
    pub records: BTreeMap<String, BTreeMap<String, String>>,
}

impl KnowledgeBase {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let kb: Self = serde_json::from_str(&text)?;
        kb.validate()?;
        Ok(kb)
    }

    pub fn validate(&self) -> Result<()> {
        if self.roles.is_empty() {
            return Err(VsaError::EmptyInput("knowledge base has no roles".into()));
        }
        for role in &self.roles {
            if self.fillers.get(role).map_or(true, |f| f.is_empty()) {
                return Err(VsaError::InvalidParameter(format!("role {role} has no fillers")));
            }
        }
        for (name, record) in &self.records {
            for role in &self.roles {
                let filler = record.get(role).ok_or_else(|| {
                    VsaError::InvalidParameter(format!("record {name} misses role {role}"))
                })?;
                if !self.fillers[role].contains(filler) {
                    return Err(VsaError::InvalidParameter(format!(
                        "record {name}: unknown filler {filler} for role {role}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Materialize codebooks for this knowledge base.
    pub fn build_schema(&self, n: usize, k: usize, kind: BlockKind, seed: u64) -> Result<RoleSchema> {
        let filler_names = self.roles.iter().map(|r| self.fillers[r].clone()).collect();
        RoleSchema::named(n, k, kind, self.roles.clone(), filler_names, seed)
    }

    pub fn encode(&self, schema: &RoleSchema, record: &str) -> Result<RecordVector> {
        let assignment = self
            .records
            .get(record)
            .ok_or_else(|| VsaError::InvalidParameter(format!("unknown record {record}")))?;
        encode_record_named(schema, assignment)
    }

    /// The role whose filler in `record` is `filler_name`, if any.
    pub fn role_of_filler(&self, record: &str, filler_name: &str) -> Option<&str> {
        let rec = self.records.get(record)?;
        self.roles
            .iter()
            .find(|role| rec.get(*role).map(String::as_str) == Some(filler_name))
            .map(String::as_str)
    }
}

/// Answer an analogy "probe : source :: ? : target": build the transform
/// from the source record to the target record, bind the probe filler
/// through it, and rank the fillers of the probe's role. Returns
/// (filler name, score) in descending score order.
pub fn answer_analogy(
    kb: &KnowledgeBase,
    schema: &RoleSchema,
    source_record: &str,
    target_record: &str,
    probe_filler: &str,
) -> Result<Vec<(String, f64)>> {
    let role_name = kb.role_of_filler(source_record, probe_filler).ok_or_else(|| {
        VsaError::InvalidParameter(format!(
            "{probe_filler} is not a filler of record {source_record}"
        ))
    })?;
    let role = schema
        .role_index(role_name)
        .ok_or_else(|| VsaError::InvalidParameter(format!("role {role_name} not in schema")))?;
    let source = kb.encode(schema, source_record)?;
    let target = kb.encode(schema, target_record)?;
    let transform = make_transform(schema, &source, &target)?;
    let book = &schema.fillers(role);
    let probe_idx = schema
        .filler_index(role, probe_filler)
        .ok_or_else(|| VsaError::InvalidParameter(format!("unknown filler {probe_filler}")))?;
    let probe = book.codebook.column(probe_idx).to_vec();
    let ranked = query(schema, &transform, &probe, &book.codebook)?;
    Ok(ranked
        .into_iter()
        .map(|(i, s)| (book.names[i].clone(), s))
        .collect())
}
