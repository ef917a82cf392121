//! Exact computations on small instances by exhaustive enumeration.
//!
//! Partitions are unordered and canonical, so every weight here is the
//! ordered-tuple weight divided by `k!`; ratios and distances are unaffected.

mod bottleneck;
mod distribution;
mod enumerate;
pub mod gaps;
mod kernel;
mod reach;

pub use bottleneck::{bottleneck_ratio, Bottleneck};
pub use distribution::{
    balanced_distribution, distribution_over, empirical, exact_distribution, fraction_balanced,
    tv_distance, ExactDistribution, Weights,
};
pub use enumerate::{enumerate_connected_partitions, EnumOptions, MAX_VERTICES, SIZE_GUARD};
pub use gaps::{
    band_state, gap_profile, rotation_class, rotation_orbit, Gap, GapEvent, GapProfile, GapShift,
    GapTracker,
};
pub use kernel::{enumerate_forests, forest_walk_kernel, ForestKernel, FOREST_EDGE_GUARD};
pub use reach::{recom_reachability_graph, ReachabilityGraph};
