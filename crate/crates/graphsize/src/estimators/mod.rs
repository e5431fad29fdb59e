//! Node-count estimators built on the query oracles.

mod edge_sampling;
mod katzir;

pub use edge_sampling::{edge_sampling, edge_sampling_centered, EdgeSamplingRun};
pub use katzir::{
    estimate_n_via_walks, katzir_estimate, katzir_sample_size, rw_stationary_batch,
    stationary_batch, walk_length, KatzirStats, SampleBatch, WalkEstimate,
};
