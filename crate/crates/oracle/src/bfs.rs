use std::collections::VecDeque;

use linkstream_bc::{NodeId, SnapshotGraph};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Distances and shortest-walk counts between every pair of nodes of one
/// snapshot.
pub(crate) struct Apsp {
    dist: Vec<Vec<Option<usize>>>,
    count: Vec<Vec<BigUint>>,
}

impl Apsp {
    pub(crate) fn new(graph: &SnapshotGraph) -> Self {
        let n = graph.node_count();
        let mut dist = vec![vec![None; n]; n];
        let mut count = vec![vec![BigUint::zero(); n]; n];
        for s in 0..n {
            let (d, c) = (&mut dist[s], &mut count[s]);
            d[s] = Some(0);
            c[s] = BigUint::one();
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let dx = d[x].unwrap();
                for &y in graph.neighbors(x) {
                    match d[y] {
                        None => {
                            d[y] = Some(dx + 1);
                            c[y] = c[x].clone();
                            queue.push_back(y);
                        }
                        Some(dy) if dy == dx + 1 => {
                            let add = c[x].clone();
                            c[y] += add;
                        }
                        _ => {}
                    }
                }
            }
        }
        Apsp { dist, count }
    }

    pub(crate) fn dist(&self, a: NodeId, b: NodeId) -> Option<usize> {
        self.dist[a][b]
    }

    pub(crate) fn count(&self, a: NodeId, b: NodeId) -> &BigUint {
        &self.count[a][b]
    }

    /// Shortest walks from `a` to `b` visiting `v`.
    pub(crate) fn through(&self, a: NodeId, v: NodeId, b: NodeId) -> BigUint {
        match (self.dist(a, v), self.dist(v, b), self.dist(a, b)) {
            (Some(x), Some(y), Some(g)) if x + y == g => self.count(a, v) * self.count(v, b),
            _ => BigUint::zero(),
        }
    }
}
