//! Compressed-sensing machinery: compression, VSA readout, sparse inference,
//! box-dot dictionary construction, and empirical RIP / spark experiments.

mod lasso;
mod matrix;
mod readout;
mod rip;
mod spark;

pub use lasso::{lambda_grid, lasso_solve, least_squares_refit, LassoConfig, LassoResult};
pub use matrix::{BoxDot, Dictionary, ProtectedSumDict, SamplingMatrix};
pub use readout::{compress, vsa_readout};
pub use rip::{ensemble_rip, estimate_rip, RipEstimate, TestVectorShape};
pub use spark::{outer_diff_column_l0, plant_null_column, spark_witness, SparkReport};
