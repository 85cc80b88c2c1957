//! Betweenness of temporal nodes in continuous-time link streams.
//!
//! Paths in a link stream cross links at real-valued instants, so the set of
//! shortest fastest paths between two temporal nodes is usually uncountable.
//! It is measured by a [`Volume`], and every quantity here is computed
//! exactly from the finitely many event times of the stream.
//!
//! The algorithms are generic over [`Scalar`]. [`Time`] (an arbitrary
//! precision rational) gives exact answers; the `F64*` aliases trade
//! exactness for speed.

pub mod betweenness;
pub mod contribution;
pub mod error;
pub mod latency;
pub mod scalar;
pub mod snapshot;
pub mod stream;
pub mod volume;
pub mod vsp;

#[cfg(test)]
mod testing;

use num_rational::BigRational;

pub use betweenness::{betweenness, profile, sample_times, Evaluator, ProfileSample};
pub use contribution::{
    contribution, find_anchor, next_list, pair_ratio, prev_list, AnchorCells, Boundary, Contribution, PathQueries,
};
pub use error::{Error, Result};
pub use latency::{latency, latency_lists, LatencyList, LatencyPair};
pub use scalar::{format_decimal, parse_rational, Scalar};
pub use snapshot::{bfs_counts, connected_components, SnapshotGraph};
pub use stream::{Interval, IntervalSet, LinkStream, LinkStreamBuilder, Slot, TemporalNode};
pub use volume::{Volume, VolumeError};
pub use vsp::{reachable, segment_volume, sweep, temporal_distance, vsp, DistVolTable, ShortestPaths};

/// Dense node index; nodes are numbered in sorted name order.
pub type NodeId = usize;

/// Exact time instants and volume sizes.
pub type Time = BigRational;
pub type Stream = LinkStream<Time>;
pub type Vol = Volume<Time>;
pub type Node = TemporalNode<Time>;

pub type F64Stream = LinkStream<f64>;
pub type F64Volume = Volume<f64>;
pub type F64Node = TemporalNode<f64>;
