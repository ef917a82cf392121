//! Sampling connected graph partitions from spanning-tree distributions.
//!
//! The crate provides two Markov chains over spanning forests, ReCom and the
//! size-biased forest walk ([`chains`]), the data structures they run on
//! ([`graph`], [`forest`], [`ust`]), exact enumeration oracles for small
//! instances ([`exact`]) and the ensemble tooling behind the CLI
//! ([`ensemble`]).

pub mod chains;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod forest;
pub mod graph;
pub mod partition;
pub mod spanning;
pub mod stats;
pub mod ust;

pub use error::{Error, Result};
pub use forest::ForestState;
pub use graph::Graph;
pub use partition::PartitionView;
