//! Graph-size estimation under local query models.
//!
//! The library provides:
//!
//! - [`graph`]: directed/undirected multigraphs with ordered adjacency lists
//!   and a line-oriented file format;
//! - [`walk`]: the lazy random walk, stationary distributions by power
//!   iteration, total-variation distance and empirical mixing times;
//! - [`conductance`]: exact general conductance `phi_eps` by subset
//!   enumeration, plus a labelled heuristic upper bound;
//! - [`ruin`]: the gambler's-ruin absorption probability;
//! - [`generators`]: configuration model, Comet/DoubleComet, sun graphs,
//!   G(n,p) with pendants, and the degree-preserving gadget pairs used in
//!   indistinguishability experiments;
//! - [`oracle`]: stateful query oracles with consecutive labelling, hidden
//!   adjacency permutations, strict query accounting, transcripts, a
//!   memoizing wrapper for sensible callers, and a lazily realized
//!   configuration-model oracle with side information;
//! - [`estimators`]: the collision (Katzir) estimator with its sample-size
//!   rule and random-walk sampler, and the EdgeSampling algorithm with its
//!   centered variant.
//!
//! All randomness flows through explicitly seeded generators; nothing reads
//! ambient entropy, so every experiment is reproducible from a 64-bit seed.

pub mod conductance;
pub mod degrees;
pub mod distribution;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod ruin;
pub mod walk;

pub mod estimators;

pub use conductance::{general_conductance, general_conductance_heuristic, ConductanceResult};
pub use degrees::{is_graphical, simple_realization, DegreeSequence};
pub use distribution::{tv_distance, Distribution};
pub use error::{Error, Result};
pub use graph::Graph;
pub use ruin::gambler_ruin_prob;
pub use walk::{lazy_step, mixing_time_empirical, stationary_distribution};
