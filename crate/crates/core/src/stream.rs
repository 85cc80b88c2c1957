//! Link streams with exact presence intervals.
//!
//! On construction a stream precomputes its event times and the snapshot
//! graph of every event time and of every open gap between consecutive
//! event times. All later queries are lookups into this timeline.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{cmp_scalar, Scalar};
use crate::snapshot::{AllPairs, SnapshotGraph};
use crate::NodeId;

/// Closed interval `[start, end]`; `start == end` is a single instant.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T> {
    pub start: T,
    pub end: T,
}

impl<T: Scalar> Interval<T> {
    pub fn contains(&self, t: &T) -> bool {
        &self.start <= t && t <= &self.end
    }
}

/// Sorted union of pairwise disjoint, non-touching closed intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<T> {
    intervals: Vec<Interval<T>>,
}

impl<T> Default for IntervalSet<T> {
    fn default() -> Self {
        IntervalSet { intervals: Vec::new() }
    }
}

impl<T: Scalar> IntervalSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `[start, end]`, merging every interval it overlaps or touches.
    pub fn insert(&mut self, start: T, end: T) -> Result<()> {
        if start > end {
            return Err(Error::InvalidInterval {
                start: start.to_string(),
                end: end.to_string(),
            });
        }
        let mut merged = Interval { start, end };
        let mut kept = Vec::with_capacity(self.intervals.len() + 1);
        for iv in self.intervals.drain(..) {
            if iv.end < merged.start || iv.start > merged.end {
                kept.push(iv);
            } else {
                if iv.start < merged.start {
                    merged.start = iv.start;
                }
                if iv.end > merged.end {
                    merged.end = iv.end;
                }
            }
        }
        let at = kept.partition_point(|iv| iv.start < merged.start);
        kept.insert(at, merged);
        self.intervals = kept;
        Ok(())
    }

    pub fn contains(&self, t: &T) -> bool {
        let at = self.intervals.partition_point(|iv| &iv.start <= t);
        at > 0 && self.intervals[at - 1].contains(t)
    }

    /// Number of maximal intervals.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval<T>> {
        self.intervals.iter()
    }
}

/// A node at a time instant.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalNode<T> {
    pub time: T,
    pub node: NodeId,
}

impl<T> TemporalNode<T> {
    pub fn new(time: T, node: NodeId) -> Self {
        TemporalNode { time, node }
    }
}

/// Position of an instant relative to the event times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Exactly the `k`-th event time.
    Event(usize),
    /// Strictly between event `k - 1` and event `k` (or before the first /
    /// after the last one).
    Gap(usize),
}

#[derive(Clone, Debug)]
struct Timeline<T> {
    events: Vec<T>,
    at_event: Vec<SnapshotGraph>,
    gaps: Vec<SnapshotGraph>,
    event_pairs: Vec<OnceLock<AllPairs>>,
    gap_pairs: Vec<OnceLock<AllPairs>>,
}

impl<T: Scalar> Timeline<T> {
    fn build(node_count: usize, presence: &BTreeMap<(NodeId, NodeId), IntervalSet<T>>) -> Self {
        let mut events: Vec<T> = presence
            .values()
            .flat_map(|set| set.iter().flat_map(|iv| [iv.start.clone(), iv.end.clone()]))
            .collect();
        events.sort_by(cmp_scalar);
        events.dedup();

        let m = events.len();
        let mut event_edges = vec![Vec::new(); m];
        let mut gap_edges = vec![Vec::new(); m + 1];
        let index_of = |t: &T| {
            events
                .binary_search_by(|e| cmp_scalar(e, t))
                .expect("interval bounds are event times")
        };
        for (&(u, v), set) in presence {
            for iv in set.iter() {
                let (b, e) = (index_of(&iv.start), index_of(&iv.end));
                for edges in &mut event_edges[b..=e] {
                    edges.push((u, v));
                }
                for edges in &mut gap_edges[b + 1..=e] {
                    edges.push((u, v));
                }
            }
        }
        let to_graph = |edges: Vec<(NodeId, NodeId)>| SnapshotGraph::from_edges(node_count, edges);
        Timeline {
            events,
            at_event: event_edges.into_iter().map(to_graph).collect(),
            gaps: gap_edges.into_iter().map(to_graph).collect(),
            event_pairs: (0..m).map(|_| OnceLock::new()).collect(),
            gap_pairs: (0..=m).map(|_| OnceLock::new()).collect(),
        }
    }

    fn slot(&self, t: &T) -> Slot {
        match self.events.binary_search_by(|e| cmp_scalar(e, t)) {
            Ok(k) => Slot::Event(k),
            Err(k) => Slot::Gap(k),
        }
    }
}

/// A link stream `(T, V, E)` with `T = [alpha, omega]`.
#[derive(Clone, Debug)]
pub struct LinkStream<T> {
    alpha: T,
    omega: T,
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    presence: BTreeMap<(NodeId, NodeId), IntervalSet<T>>,
    timeline: Timeline<T>,
}

impl<T: Scalar> LinkStream<T> {
    pub fn builder(alpha: T, omega: T) -> Result<LinkStreamBuilder<T>> {
        if alpha > omega {
            return Err(Error::InvalidWindow {
                alpha: alpha.to_string(),
                omega: omega.to_string(),
            });
        }
        Ok(LinkStreamBuilder {
            alpha,
            omega,
            nodes: BTreeSet::new(),
            links: Vec::new(),
        })
    }

    /// Parses the text format: an `alpha omega` header, then `u v b e` link
    /// lines. A line holding a single identifier declares a node without
    /// links. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut builder: Option<LinkStreamBuilder<T>> = None;
        for (number, raw) in text.lines().enumerate() {
            let line = number + 1;
            let content = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let time = |s: &str| T::parse_literal(s).ok_or_else(|| err(format!("invalid time literal `{s}`")));
            match builder.as_mut() {
                None => {
                    let [a, o] = fields[..] else {
                        return Err(err(format!(
                            "expected header `alpha omega`, found {} field(s)",
                            fields.len()
                        )));
                    };
                    let b = LinkStream::builder(time(a)?, time(o)?).map_err(|e| err(e.to_string()))?;
                    builder = Some(b);
                }
                Some(b) => match fields[..] {
                    [node] => {
                        b.add_node(node);
                    }
                    [u, v, start, end] => {
                        let (start, end) = (time(start)?, time(end)?);
                        b.add_link(u, v, start, end).map_err(|e| err(e.to_string()))?;
                    }
                    _ => {
                        return Err(err(format!(
                            "expected `u v b e` or a node name, found {} fields",
                            fields.len()
                        )))
                    }
                },
            }
        }
        builder
            .ok_or(Error::Parse {
                line: 1,
                message: "missing `alpha omega` header".into(),
            })?
            .build()
    }

    /// Serializes to the text format read by [`LinkStream::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.alpha, self.omega);
        let linked: BTreeSet<NodeId> = self.presence.keys().flat_map(|&(u, v)| [u, v]).collect();
        for (id, name) in self.names.iter().enumerate() {
            if !linked.contains(&id) {
                let _ = writeln!(out, "{name}");
            }
        }
        for (&(u, v), set) in &self.presence {
            for iv in set.iter() {
                let _ = writeln!(out, "{} {} {} {}", self.names[u], self.names[v], iv.start, iv.end);
            }
        }
        out
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn omega(&self) -> &T {
        &self.omega
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.names[id]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn presence(&self, u: NodeId, v: NodeId) -> Option<&IntervalSet<T>> {
        self.presence.get(&(u.min(v), u.max(v)))
    }

    /// All linked pairs `(u, v)` with `u < v` and their presence.
    pub fn links(&self) -> impl Iterator<Item = ((NodeId, NodeId), &IntervalSet<T>)> {
        self.presence.iter().map(|(&k, v)| (k, v))
    }

    /// Total number of maximal presence intervals.
    pub fn segment_count(&self) -> usize {
        self.presence.values().map(IntervalSet::len).sum()
    }

    /// Sorted, duplicate-free bounds of all maximal presence intervals.
    pub fn event_times(&self) -> &[T] {
        &self.timeline.events
    }

    pub fn contains_time(&self, t: &T) -> bool {
        &self.alpha <= t && t <= &self.omega
    }

    pub fn check_time(&self, t: &T) -> Result<()> {
        if self.contains_time(t) {
            Ok(())
        } else {
            Err(Error::OutOfWindow {
                time: t.to_string(),
                alpha: self.alpha.to_string(),
                omega: self.omega.to_string(),
            })
        }
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeIndex(node))
        }
    }

    pub fn check_temporal_node(&self, tn: &TemporalNode<T>) -> Result<()> {
        self.check_node(tn.node)?;
        self.check_time(&tn.time)
    }

    /// Builds a validated temporal node from a node name.
    pub fn temporal_node(&self, time: T, name: &str) -> Result<TemporalNode<T>> {
        let node = self.node_id(name)?;
        self.check_time(&time)?;
        Ok(TemporalNode { time, node })
    }

    pub fn slot(&self, t: &T) -> Slot {
        self.timeline.slot(t)
    }

    /// Index of the open gap starting at `t` (the gap right after `t`).
    pub fn gap_after(&self, t: &T) -> usize {
        self.timeline.events.partition_point(|e| e <= t)
    }

    /// Index of the open gap ending at `t` (the gap right before `t`).
    pub fn gap_before(&self, t: &T) -> usize {
        self.timeline.events.partition_point(|e| e < t)
    }

    pub fn graph(&self, slot: Slot) -> &SnapshotGraph {
        match slot {
            Slot::Event(k) => &self.timeline.at_event[k],
            Slot::Gap(k) => &self.timeline.gaps[k],
        }
    }

    /// Cached all-pairs BFS of the snapshot at `slot`.
    pub fn all_pairs(&self, slot: Slot) -> &AllPairs {
        let cell = match slot {
            Slot::Event(k) => &self.timeline.event_pairs[k],
            Slot::Gap(k) => &self.timeline.gap_pairs[k],
        };
        cell.get_or_init(|| AllPairs::new(self.graph(slot)))
    }

    /// The instantaneous graph `G_t`.
    pub fn graph_at(&self, t: &T) -> Result<&SnapshotGraph> {
        self.check_time(t)?;
        Ok(self.graph(self.slot(t)))
    }

    /// The graph shared by every instant of `]t, t2[`.
    pub fn graph_between(&self, t: &T, t2: &T) -> Result<&SnapshotGraph> {
        self.check_time(t)?;
        self.check_time(t2)?;
        if t >= t2 {
            return Err(Error::Precondition(format!("expected {t} < {t2}")));
        }
        let gap = self.gap_after(t);
        if gap < self.timeline.events.len() && &self.timeline.events[gap] < t2 {
            return Err(Error::Precondition(format!(
                "event time {} lies strictly between {t} and {t2}",
                self.timeline.events[gap]
            )));
        }
        Ok(&self.timeline.gaps[gap])
    }

    /// Applies a monotone (increasing or decreasing) map to every time.
    pub fn map_times<F: Fn(&T) -> T>(&self, f: F) -> Result<Self> {
        let (a, o) = (f(&self.alpha), f(&self.omega));
        let (alpha, omega) = if a <= o { (a, o) } else { (o, a) };
        let mut b = LinkStream::builder(alpha, omega)?;
        for name in &self.names {
            b.add_node(name);
        }
        for (&(u, v), set) in &self.presence {
            for iv in set.iter() {
                let (s, e) = (f(&iv.start), f(&iv.end));
                let (s, e) = if s <= e { (s, e) } else { (e, s) };
                b.add_link(&self.names[u], &self.names[v], s, e)?;
            }
        }
        b.build()
    }

    /// Renames every node through `f`, which must be injective.
    pub fn relabel<F: Fn(&str) -> String>(&self, f: F) -> Result<Self> {
        let mut b = LinkStream::builder(self.alpha.clone(), self.omega.clone())?;
        for name in &self.names {
            b.add_node(&f(name));
        }
        for (&(u, v), set) in &self.presence {
            for iv in set.iter() {
                b.add_link(&f(&self.names[u]), &f(&self.names[v]), iv.start.clone(), iv.end.clone())?;
            }
        }
        b.build()
    }
}

/// Incremental construction of a [`LinkStream`].
#[derive(Clone, Debug)]
pub struct LinkStreamBuilder<T> {
    alpha: T,
    omega: T,
    nodes: BTreeSet<String>,
    links: Vec<(String, String, T, T)>,
}

impl<T: Scalar> LinkStreamBuilder<T> {
    pub fn add_node(&mut self, name: &str) -> &mut Self {
        self.nodes.insert(name.to_string());
        self
    }

    pub fn add_link(&mut self, u: &str, v: &str, start: T, end: T) -> Result<&mut Self> {
        if u == v {
            return Err(Error::SelfLoop(u.to_string()));
        }
        if start > end {
            return Err(Error::InvalidInterval {
                start: start.to_string(),
                end: end.to_string(),
            });
        }
        for t in [&start, &end] {
            if t < &self.alpha || t > &self.omega {
                return Err(Error::OutOfWindow {
                    time: t.to_string(),
                    alpha: self.alpha.to_string(),
                    omega: self.omega.to_string(),
                });
            }
        }
        self.nodes.insert(u.to_string());
        self.nodes.insert(v.to_string());
        self.links.push((u.to_string(), v.to_string(), start, end));
        Ok(self)
    }

    pub fn build(&self) -> Result<LinkStream<T>> {
        let names: Vec<String> = self.nodes.iter().cloned().collect();
        let index: HashMap<String, NodeId> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let mut presence: BTreeMap<(NodeId, NodeId), IntervalSet<T>> = BTreeMap::new();
        for (u, v, start, end) in &self.links {
            let (u, v) = (index[u], index[v]);
            presence
                .entry((u.min(v), u.max(v)))
                .or_default()
                .insert(start.clone(), end.clone())?;
        }
        let timeline = Timeline::build(names.len(), &presence);
        Ok(LinkStream {
            alpha: self.alpha.clone(),
            omega: self.omega.clone(),
            names,
            index,
            presence,
            timeline,
        })
    }
}
