//! Key-value records over sparse block-codes, transformation vectors
//! between records, analogical queries, and capacity prediction.

mod capacity;
mod knowledge;
mod schema;

pub use capacity::{predict_accuracy, run_capacity_experiment, CapacityCell};
pub use knowledge::{answer_analogy, KnowledgeBase};
pub use schema::{
    encode_record, encode_record_named, make_transform, query, FillerBook, RecordVector,
    RoleSchema, TransformVector,
};
