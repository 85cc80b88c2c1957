//! Betweenness of temporal nodes.
//!
//! [`Evaluator`] answers many betweenness queries on one stream. It keeps
//! the latency lists of every source node, a sweep from every
//! `(event time, node)` pair, and the boundary lists of every anchor it
//! meets, so that one query only sweeps once from the queried temporal node.
//! It is `Sync`: queries may run from several threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::contribution::{find_anchor, AnchorCells, PathQueries};
use crate::error::Result;
use crate::latency::{latency_lists, LatencyList};
use crate::scalar::Scalar;
use crate::stream::{LinkStream, Slot, TemporalNode};
use crate::vsp::{vsp, DistVolTable, ShortestPaths};
use crate::NodeId;

type CellKey = (NodeId, NodeId, usize);

pub struct Evaluator<'a, T> {
    stream: &'a LinkStream<T>,
    lists: Vec<OnceLock<Vec<LatencyList<T>>>>,
    // [event index][node]: sweep from (event, node) to omega
    sweeps: Vec<Vec<OnceLock<DistVolTable<T>>>>,
    cells: Mutex<HashMap<CellKey, Arc<AnchorCells<T>>>>,
}

impl<'a, T: Scalar> Evaluator<'a, T> {
    pub fn new(stream: &'a LinkStream<T>) -> Self {
        let n = stream.node_count();
        Evaluator {
            stream,
            lists: (0..n).map(|_| OnceLock::new()).collect(),
            sweeps: stream
                .event_times()
                .iter()
                .map(|_| (0..n).map(|_| OnceLock::new()).collect())
                .collect(),
            cells: Mutex::new(HashMap::new()),
        }
    }

    pub fn stream(&self) -> &'a LinkStream<T> {
        self.stream
    }

    /// Latency lists from `u`, computed on first use.
    pub fn latency_lists(&self, u: NodeId) -> Result<&[LatencyList<T>]> {
        self.stream.check_node(u)?;
        if let Some(lists) = self.lists[u].get() {
            return Ok(lists);
        }
        let lists = latency_lists(self.stream, u)?;
        Ok(self.lists[u].get_or_init(|| lists))
    }

    fn event_sweep(&self, k: usize, node: NodeId) -> Result<&DistVolTable<T>> {
        if let Some(table) = self.sweeps[k][node].get() {
            return Ok(table);
        }
        let src = TemporalNode::new(self.stream.event_times()[k].clone(), node);
        let table = DistVolTable::new(self.stream, &src, self.stream.omega())?;
        Ok(self.sweeps[k][node].get_or_init(|| table))
    }

    fn cells(&self, paths: &Queries<'_, 'a, T>, u: NodeId, w: NodeId, index: usize) -> Result<Arc<AnchorCells<T>>> {
        let key = (u, w, index);
        if let Some(found) = self.cells.lock().expect("cell cache lock").get(&key) {
            return Ok(Arc::clone(found));
        }
        let list = &self.latency_lists(u)?[w];
        let cells = Arc::new(AnchorCells::new(paths, u, w, list, index)?);
        self.cells
            .lock()
            .expect("cell cache lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&cells));
        Ok(cells)
    }

    /// Contribution of `(u, w)` to the betweenness of `tv`.
    pub fn contribution(&self, u: NodeId, w: NodeId, tv: &TemporalNode<T>) -> Result<T> {
        let paths = Queries::new(self, tv)?;
        self.contribution_in(&paths, u, w, tv)
    }

    fn contribution_in(&self, paths: &Queries<'_, 'a, T>, u: NodeId, w: NodeId, tv: &TemporalNode<T>) -> Result<T> {
        let list = &self.latency_lists(u)?[w];
        match find_anchor(paths, u, w, tv, list)? {
            Some((k, through)) if !through.is_zero() => self.cells(paths, u, w, k)?.integrate(&through),
            _ => Ok(T::zero()),
        }
    }

    /// Betweenness of `tv`: the sum of the contributions of all ordered
    /// node pairs, including `u = w`.
    pub fn betweenness(&self, tv: &TemporalNode<T>) -> Result<T> {
        let paths = Queries::new(self, tv)?;
        let n = self.stream.node_count();
        let mut total = T::zero();
        for u in 0..n {
            for w in 0..n {
                total = total + self.contribution_in(&paths, u, w, tv)?;
            }
        }
        Ok(total)
    }
}

/// Path queries for one temporal node `tv`: sweeps from `tv` and from event
/// times are served from tables, anything else by a fresh sweep.
struct Queries<'e, 'a, T> {
    eval: &'e Evaluator<'a, T>,
    from_tv: DistVolTable<T>,
}

impl<'e, 'a, T: Scalar> Queries<'e, 'a, T> {
    fn new(eval: &'e Evaluator<'a, T>, tv: &TemporalNode<T>) -> Result<Self> {
        let from_tv = DistVolTable::new(eval.stream, tv, eval.stream.omega())?;
        Ok(Queries { eval, from_tv })
    }
}

impl<T: Scalar> PathQueries<T> for Queries<'_, '_, T> {
    fn stream(&self) -> &LinkStream<T> {
        self.eval.stream
    }

    fn shortest(&self, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<ShortestPaths<T>> {
        let stream = self.eval.stream;
        if src.time > dst.time {
            stream.check_temporal_node(dst)?;
            return Ok(ShortestPaths::unreachable());
        }
        if src == self.from_tv.source() {
            return self.from_tv.get(stream, dst);
        }
        stream.check_temporal_node(src)?;
        match stream.slot(&src.time) {
            Slot::Event(k) => self.eval.event_sweep(k, src.node)?.get(stream, dst),
            Slot::Gap(_) => vsp(stream, src, dst),
        }
    }
}

/// Betweenness of one temporal node.
pub fn betweenness<T: Scalar>(stream: &LinkStream<T>, tv: &TemporalNode<T>) -> Result<T> {
    Evaluator::new(stream).betweenness(tv)
}

/// `alpha + i (omega - alpha) / samples` for `i = 0..=samples`.
pub fn sample_times<T: Scalar>(stream: &LinkStream<T>, samples: usize) -> Vec<T> {
    let (alpha, omega) = (stream.alpha().clone(), stream.omega().clone());
    let n = T::from_usize(samples.max(1));
    (0..=samples)
        .map(|i| alpha.clone() + (omega.clone() - alpha.clone()) * T::from_usize(i) / n.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSample<T> {
    pub node: NodeId,
    pub time: T,
    pub value: T,
}

/// Betweenness of every node at every sample time, node by node.
pub fn profile<T: Scalar>(stream: &LinkStream<T>, samples: usize) -> Result<Vec<ProfileSample<T>>> {
    if samples == 0 {
        return Err(crate::error::Error::Precondition(
            "at least one sample interval is needed".into(),
        ));
    }
    let eval = Evaluator::new(stream);
    let times = sample_times(stream, samples);
    let mut out = Vec::with_capacity(stream.node_count() * times.len());
    for node in 0..stream.node_count() {
        for time in &times {
            let tv = TemporalNode::new(time.clone(), node);
            let value = eval.betweenness(&tv)?;
            out.push(ProfileSample {
                node,
                time: time.clone(),
                value,
            });
        }
    }
    Ok(out)
}
