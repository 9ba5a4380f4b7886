//! Scalar level encoders, key-value feature encoding with clipping, ridge
//! readout, cross-validation, and grid search over tabular datasets.

mod dataset;
mod encoder;
mod pipeline;

pub use dataset::{
    cross_validate, grid_search, ingest_dataset, stratified_folds, CvReport, Dataset, GridPoint,
    Normalizer,
};
pub use encoder::{LevelEncoder, LevelScheme};
pub use pipeline::{encode_sample, predict, ridge_train, PipelineConfig, RidgeModel};
