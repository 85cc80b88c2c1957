//! Static graph snapshots of a link stream and the classical algorithms run
//! on them.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::NodeId;

/// Undirected simple graph on the dense node indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnapshotGraph {
    adjacency: Vec<Vec<NodeId>>,
}

impl SnapshotGraph {
    pub fn empty(node_count: usize) -> Self {
        SnapshotGraph {
            adjacency: vec![Vec::new(); node_count],
        }
    }

    /// Builds a graph from unordered pairs. Duplicate pairs are collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            debug_assert!(u != v && u < node_count && v < node_count);
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        SnapshotGraph { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.adjacency.iter().all(Vec::is_empty)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

/// Distances and shortest-path counts from one source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsResult {
    pub dist: Vec<Option<usize>>,
    pub count: Vec<BigUint>,
}

impl BfsResult {
    pub fn distance(&self, node: NodeId) -> Option<usize> {
        self.dist[node]
    }

    pub fn paths(&self, node: NodeId) -> &BigUint {
        &self.count[node]
    }
}

/// Breadth-first search counting shortest paths exactly.
pub fn bfs_counts(graph: &SnapshotGraph, source: NodeId) -> Result<BfsResult> {
    let n = graph.node_count();
    if source >= n {
        return Err(Error::NodeIndex(source));
    }
    let mut dist = vec![None; n];
    let mut count = vec![BigUint::zero(); n];
    dist[source] = Some(0);
    count[source] = BigUint::one();
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x].expect("queued nodes have a distance");
        for &y in graph.neighbors(x) {
            match dist[y] {
                None => {
                    dist[y] = Some(dx + 1);
                    count[y] = count[x].clone();
                    queue.push_back(y);
                }
                Some(dy) if dy == dx + 1 => {
                    let add = count[x].clone();
                    count[y] += add;
                }
                Some(_) => {}
            }
        }
    }
    Ok(BfsResult { dist, count })
}

/// Connected components ordered by smallest member; members sorted.
pub fn connected_components(graph: &SnapshotGraph) -> Vec<Vec<NodeId>> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut members = vec![root];
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in graph.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// BFS results from every source of one graph.
#[derive(Clone, Debug)]
pub struct AllPairs {
    rows: Vec<BfsResult>,
}

impl AllPairs {
    pub fn new(graph: &SnapshotGraph) -> Self {
        let rows = (0..graph.node_count())
            .map(|s| bfs_counts(graph, s).expect("source index is in range"))
            .collect();
        AllPairs { rows }
    }

    pub fn from(&self, source: NodeId) -> &BfsResult {
        &self.rows[source]
    }

    pub fn distance(&self, from: NodeId, to: NodeId) -> Option<usize> {
        self.rows[from].dist[to]
    }
}
