//! Latency pairs and latency lists.
//!
//! `(s, a)` is a latency pair from `u` to `w` when the fastest paths from
//! `(s, u)` to `(a, w)` start exactly at `s` and arrive exactly at `a`.
//! Non-instantaneous pairs always sit on event times, and the pairs from one
//! node to another are componentwise ordered.

use std::fmt;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::snapshot::connected_components;
use crate::stream::{LinkStream, Slot, TemporalNode};
use crate::NodeId;

#[derive(Clone, Debug, PartialEq)]
pub struct LatencyPair<T> {
    pub start: T,
    pub arrival: T,
}

impl<T: Scalar> LatencyPair<T> {
    pub fn new(start: T, arrival: T) -> Self {
        LatencyPair { start, arrival }
    }

    pub fn latency(&self) -> T {
        self.arrival.clone() - self.start.clone()
    }

    pub fn is_instantaneous(&self) -> bool {
        self.start == self.arrival
    }

    pub fn contains(&self, t: &T) -> bool {
        &self.start <= t && t <= &self.arrival
    }
}

impl<T: fmt::Display> fmt::Display for LatencyPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.arrival)
    }
}

/// Latency pairs from one node to another, in increasing order of both
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LatencyList<T> {
    pairs: Vec<LatencyPair<T>>,
}

impl<T> Default for LatencyList<T> {
    fn default() -> Self {
        LatencyList { pairs: Vec::new() }
    }
}

impl<T: Scalar> LatencyList<T> {
    pub fn pairs(&self) -> &[LatencyPair<T>] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatencyPair<T>> {
        self.pairs.iter()
    }

    pub fn last(&self) -> Option<&LatencyPair<T>> {
        self.pairs.last()
    }
}

impl<T: fmt::Display> fmt::Display for LatencyList<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, pair) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{pair}")?;
        }
        Ok(())
    }
}

/// Latency lists from `u` to every node, indexed by node.
///
/// At each event time the latest start reaching each connected component is
/// propagated to the rest of the component. `(t, t)` is recorded in the list
/// of `u` itself at every event time.
pub fn latency_lists<T: Scalar>(stream: &LinkStream<T>, u: NodeId) -> Result<Vec<LatencyList<T>>> {
    stream.check_node(u)?;
    let mut lists: Vec<LatencyList<T>> = vec![LatencyList::default(); stream.node_count()];
    for (k, t) in stream.event_times().iter().enumerate() {
        lists[u].pairs.push(LatencyPair::new(t.clone(), t.clone()));
        for component in connected_components(stream.graph(Slot::Event(k))) {
            let mut latest: Option<&T> = None;
            let mut reached: Vec<NodeId> = Vec::new();
            for &w in &component {
                let Some(last) = lists[w].pairs.last() else { continue };
                match latest {
                    Some(s) if &last.start < s => {}
                    Some(s) if &last.start == s => reached.push(w),
                    _ => {
                        latest = Some(&last.start);
                        reached = vec![w];
                    }
                }
            }
            let Some(start) = latest.cloned() else { continue };
            for &w in &component {
                if !reached.contains(&w) {
                    lists[w].pairs.push(LatencyPair::new(start.clone(), t.clone()));
                }
            }
        }
    }
    Ok(lists)
}

/// Latency from `src` to `dst`: the smallest duration of a path between
/// them, or `None` when `dst` is unreachable.
pub fn latency<T: Scalar>(stream: &LinkStream<T>, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<Option<T>> {
    stream.check_temporal_node(src)?;
    stream.check_temporal_node(dst)?;
    if src.time > dst.time {
        return Ok(None);
    }
    if src.node == dst.node {
        return Ok(Some(T::zero()));
    }
    // an instantaneous path at a non-event time also exists at the
    // neighbouring event times, unless the query window lies inside one gap
    let pairs = stream.all_pairs(stream.slot(&src.time));
    if pairs.distance(src.node, dst.node).is_some() {
        return Ok(Some(T::zero()));
    }
    let lists = latency_lists(stream, src.node)?;
    let best = lists[dst.node]
        .iter()
        .filter(|p| p.start >= src.time && p.arrival <= dst.time)
        .map(LatencyPair::latency)
        .reduce(|a, b| if b < a { b } else { a });
    Ok(best)
}
