//! Volumes of shortest paths between temporal nodes.
//!
//! A sweep starts from a temporal node `(i, u)` with a BFS in `G_i` and then
//! walks through the event times after `i`. Between two consecutive
//! processed times `t < t'` a path either finishes inside the open gap
//! `]t, t'[` (sliding crossings, counted with the gap graph) or makes its last
//! hop exactly at `t'` (counted with `G_t'`).

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::snapshot::{bfs_counts, AllPairs, SnapshotGraph};
use crate::stream::{LinkStream, Slot, TemporalNode};
use crate::volume::Volume;
use crate::NodeId;

/// Distance and volume of the shortest paths between two temporal nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPaths<T> {
    pub volume: Volume<T>,
    /// `None` when the destination is unreachable.
    pub distance: Option<usize>,
}

impl<T: Scalar> ShortestPaths<T> {
    pub fn unreachable() -> Self {
        ShortestPaths {
            volume: Volume::zero(),
            distance: None,
        }
    }

    pub fn is_reachable(&self) -> bool {
        self.distance.is_some()
    }
}

#[derive(Clone, Debug)]
struct Frame<T> {
    dist: Vec<Option<usize>>,
    // empty for distance-only sweeps
    vol: Vec<Volume<T>>,
}

/// `(sigma * (t2 - t)^d / d!, d)`: volume of `sigma` sliding sets of `d`
/// crossings inside a window of length `t2 - t`.
fn sliding_volume<T: Scalar>(sigma: &BigUint, d: usize, width: &T) -> Volume<T> {
    let mut size = T::from_count(sigma);
    for k in 1..=d {
        size = size * width.clone() / T::from_usize(k);
    }
    Volume::new(size, d)
}

/// Volume of the shortest paths from `(t, x)` to `(t2, w)` whose crossings
/// all lie in `]t, t2[`, where `g_plus` is the graph of that gap.
pub fn segment_volume<T: Scalar>(g_plus: &SnapshotGraph, x: NodeId, w: NodeId, t: &T, t2: &T) -> Result<Volume<T>> {
    if t >= t2 {
        return Err(Error::TimeOrder {
            from: t.to_string(),
            to: t2.to_string(),
        });
    }
    if w >= g_plus.node_count() {
        return Err(Error::NodeIndex(w));
    }
    let bfs = bfs_counts(g_plus, x)?;
    Ok(match bfs.distance(w) {
        Some(d) => sliding_volume(bfs.paths(w), d, &(t2.clone() - t.clone())),
        None => Volume::zero(),
    })
}

fn initial_frame<T: Scalar>(stream: &LinkStream<T>, src: &TemporalNode<T>, volumes: bool) -> Frame<T> {
    let row = stream.all_pairs(stream.slot(&src.time)).from(src.node);
    let vol = if volumes {
        row.count
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Volume::zero()
                } else {
                    Volume::new(T::from_count(c), 0)
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    Frame {
        dist: row.dist.clone(),
        vol,
    }
}

/// New distances at `t2` from distances at `t`: a BFS in `g_next` seeded by
/// the previous distances, which can only decrease.
fn advance_distances(prev: &[Option<usize>], g_next: &SnapshotGraph) -> Vec<Option<usize>> {
    let n = prev.len();
    let mut seeds: Vec<(usize, NodeId)> = prev.iter().enumerate().filter_map(|(w, d)| d.map(|d| (d, w))).collect();
    seeds.sort_unstable();
    let mut seeds = seeds.into_iter().peekable();
    let mut queue: VecDeque<(usize, NodeId)> = VecDeque::new();
    let mut dist = vec![None; n];
    loop {
        let from_seeds = match (seeds.peek(), queue.front()) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(&(dx, _)), Some(&(dq, _))) => dx <= dq,
        };
        let (d, w) = if from_seeds {
            seeds.next().expect("peeked")
        } else {
            queue.pop_front().expect("non-empty")
        };
        if dist[w].is_some() {
            continue;
        }
        dist[w] = Some(d);
        for &y in g_next.neighbors(w) {
            if dist[y].is_none() {
                queue.push_back((d + 1, y));
            }
        }
    }
    dist
}

fn advance<T: Scalar>(stream: &LinkStream<T>, frame: &Frame<T>, t: &T, t2: &T, volumes: bool) -> Frame<T> {
    let next_slot = stream.slot(t2);
    let dist = advance_distances(&frame.dist, stream.graph(next_slot));
    if !volumes {
        return Frame { dist, vol: Vec::new() };
    }
    let gap = Slot::Gap(stream.gap_after(t));
    let gap_pairs: &AllPairs = stream.all_pairs(gap);
    let g_next = stream.graph(next_slot);
    let width = t2.clone() - t.clone();

    let mut order: Vec<(usize, NodeId)> = dist.iter().enumerate().filter_map(|(w, d)| d.map(|d| (d, w))).collect();
    order.sort_unstable();

    let n = dist.len();
    let mut vol = vec![Volume::zero(); n];
    for &(dw, w) in &order {
        let mut acc = Volume::zero();
        for (x, dx) in frame.dist.iter().enumerate() {
            let Some(dx) = *dx else { continue };
            let row = gap_pairs.from(x);
            let Some(dxw) = row.distance(w) else { continue };
            if dx + dxw == dw {
                let seg = sliding_volume(row.paths(w), dxw, &width);
                acc = acc.add(&frame.vol[x].mul(&seg));
            }
        }
        for &y in g_next.neighbors(w) {
            if dist[y].map(|dy| dy + 1) == Some(dw) {
                acc = acc.add(&vol[y]);
            }
        }
        vol[w] = acc;
    }
    Frame { dist, vol }
}

/// Sweep state from a source temporal node: distances (and volumes) to every
/// node at the source time and at each later event time up to a horizon.
#[derive(Clone, Debug)]
pub struct DistVolTable<T> {
    source: TemporalNode<T>,
    horizon: T,
    times: Vec<T>,
    frames: Vec<Frame<T>>,
    volumes: bool,
}

impl<T: Scalar> DistVolTable<T> {
    /// Full sweep from `src` up to `horizon`.
    pub fn new(stream: &LinkStream<T>, src: &TemporalNode<T>, horizon: &T) -> Result<Self> {
        Self::build(stream, src, horizon, true)
    }

    /// Sweep keeping distances only.
    pub fn distances(stream: &LinkStream<T>, src: &TemporalNode<T>, horizon: &T) -> Result<Self> {
        Self::build(stream, src, horizon, false)
    }

    fn build(stream: &LinkStream<T>, src: &TemporalNode<T>, horizon: &T, volumes: bool) -> Result<Self> {
        stream.check_temporal_node(src)?;
        stream.check_time(horizon)?;
        if &src.time > horizon {
            return Err(Error::TimeOrder {
                from: src.time.to_string(),
                to: horizon.to_string(),
            });
        }
        let events = stream.event_times();
        let first = stream.gap_after(&src.time);
        let last = stream.gap_after(horizon);
        let mut times = vec![src.time.clone()];
        times.extend(events[first..last].iter().cloned());

        let mut frames = Vec::with_capacity(times.len());
        frames.push(initial_frame(stream, src, volumes));
        for k in 1..times.len() {
            let next = advance(stream, &frames[k - 1], &times[k - 1], &times[k], volumes);
            frames.push(next);
        }
        Ok(DistVolTable {
            source: src.clone(),
            horizon: horizon.clone(),
            times,
            frames,
            volumes,
        })
    }

    pub fn source(&self) -> &TemporalNode<T> {
        &self.source
    }

    fn frame_at(&self, stream: &LinkStream<T>, time: &T) -> Result<std::borrow::Cow<'_, Frame<T>>> {
        if time < &self.source.time {
            return Err(Error::TimeOrder {
                from: self.source.time.to_string(),
                to: time.to_string(),
            });
        }
        if time > &self.horizon {
            return Err(Error::Precondition(format!(
                "time {time} is past the sweep horizon {}",
                self.horizon
            )));
        }
        let k = self.times.partition_point(|x| x <= time) - 1;
        if &self.times[k] == time {
            Ok(std::borrow::Cow::Borrowed(&self.frames[k]))
        } else {
            let frame = advance(stream, &self.frames[k], &self.times[k], time, self.volumes);
            Ok(std::borrow::Cow::Owned(frame))
        }
    }

    /// Shortest paths from the source to `dst`. `stream` must be the stream
    /// the table was built from.
    pub fn get(&self, stream: &LinkStream<T>, dst: &TemporalNode<T>) -> Result<ShortestPaths<T>> {
        stream.check_node(dst.node)?;
        let frame = self.frame_at(stream, &dst.time)?;
        let distance = frame.dist[dst.node];
        let volume = if self.volumes {
            frame.vol[dst.node].clone()
        } else {
            Volume::zero()
        };
        Ok(ShortestPaths { volume, distance })
    }

    pub fn distance(&self, stream: &LinkStream<T>, dst: &TemporalNode<T>) -> Result<Option<usize>> {
        stream.check_node(dst.node)?;
        Ok(self.frame_at(stream, &dst.time)?.dist[dst.node])
    }
}

/// Runs the sweep from `src` up to `horizon`.
pub fn sweep<T: Scalar>(stream: &LinkStream<T>, src: &TemporalNode<T>, horizon: &T) -> Result<DistVolTable<T>> {
    DistVolTable::new(stream, src, horizon)
}

/// Volume of the shortest paths from `src` to `dst` and their length.
pub fn vsp<T: Scalar>(
    stream: &LinkStream<T>,
    src: &TemporalNode<T>,
    dst: &TemporalNode<T>,
) -> Result<ShortestPaths<T>> {
    stream.check_temporal_node(dst)?;
    DistVolTable::new(stream, src, &dst.time)?.get(stream, dst)
}

/// Length of the shortest paths from `src` to `dst`, if any.
pub fn temporal_distance<T: Scalar>(
    stream: &LinkStream<T>,
    src: &TemporalNode<T>,
    dst: &TemporalNode<T>,
) -> Result<Option<usize>> {
    stream.check_temporal_node(dst)?;
    DistVolTable::distances(stream, src, &dst.time)?.distance(stream, dst)
}

/// Whether some temporal path leads from `src` to `dst`.
pub fn reachable<T: Scalar>(stream: &LinkStream<T>, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<bool> {
    stream.check_temporal_node(src)?;
    stream.check_temporal_node(dst)?;
    if src.time > dst.time {
        return Ok(false);
    }
    Ok(temporal_distance(stream, src, dst)?.is_some())
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::testing::{fig1, q};

    type V = Volume<BigRational>;

    fn tn(s: &LinkStream<BigRational>, t: i64, d: i64, name: &str) -> TemporalNode<BigRational> {
        s.temporal_node(q(t, d), name).unwrap()
    }

    fn vq(n: i64, d: i64, dim: usize) -> V {
        Volume::new(q(n, d), dim)
    }

    #[test]
    fn sample_stream_golden_volumes() {
        let s = fig1();
        let cases = [
            ((0, "a"), (14, "e"), vq(4, 1, 4), Some(4)),
            ((4, "a"), (17, "e"), vq(2, 1, 2), None),
            ((12, "a"), (26, "e"), vq(1, 1, 2), None),
            ((20, "a"), (32, "e"), vq(11, 2, 4), None),
            ((0, "a"), (18, "e"), vq(2, 1, 2), None),
            ((0, "a"), (23, "e"), vq(5, 1, 2), None),
            ((0, "a"), (26, "e"), vq(3, 1, 3), None),
            ((0, "a"), (32, "e"), vq(8, 1, 3), Some(3)),
        ];
        for ((i, u), (j, w), volume, distance) in cases {
            let r = vsp(&s, &tn(&s, i, 1, u), &tn(&s, j, 1, w)).unwrap();
            assert_eq!(r.volume, volume, "({i},{u}) -> ({j},{w})");
            if let Some(d) = distance {
                assert_eq!(r.distance, Some(d));
            }
        }
    }

    #[test]
    fn unreachable_pairs() {
        let s = fig1();
        let r = vsp(&s, &tn(&s, 0, 1, "a"), &tn(&s, 8, 1, "e")).unwrap();
        assert_eq!(r, ShortestPaths::unreachable());
        assert!(!reachable(&s, &tn(&s, 3, 1, "a"), &tn(&s, 8, 1, "e")).unwrap());
        assert!(reachable(&s, &tn(&s, 0, 1, "a"), &tn(&s, 14, 1, "e")).unwrap());
        assert!(!reachable(&s, &tn(&s, 14, 1, "a"), &tn(&s, 0, 1, "e")).unwrap());
    }

    #[test]
    fn empty_path_to_itself() {
        let s = fig1();
        let x = tn(&s, 9, 2, "c");
        let r = vsp(&s, &x, &x).unwrap();
        assert_eq!(r.volume, V::unit());
        assert_eq!(r.distance, Some(0));
        assert!(reachable(&s, &x, &x).unwrap());
        // waiting at a node is a length-zero path of volume 1 and dimension 0
        let later = tn(&s, 30, 1, "c");
        assert_eq!(vsp(&s, &x, &later).unwrap().volume, V::unit());
    }

    #[test]
    fn rejects_reversed_and_out_of_window_queries() {
        let s = fig1();
        assert!(matches!(
            vsp(&s, &tn(&s, 5, 1, "a"), &tn(&s, 4, 1, "e")),
            Err(Error::TimeOrder { .. })
        ));
        let outside = TemporalNode::new(q(40, 1), 0);
        assert!(matches!(
            vsp(&s, &tn(&s, 5, 1, "a"), &outside),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn segment_volume_examples() {
        let chain = SnapshotGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(segment_volume(&chain, 0, 2, &q(0, 1), &q(2, 1)).unwrap(), vq(2, 1, 2));
        assert_eq!(segment_volume(&chain, 1, 1, &q(0, 1), &q(2, 1)).unwrap(), vq(1, 1, 0));
        let diamond = SnapshotGraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(segment_volume(&diamond, 0, 3, &q(1, 1), &q(4, 1)).unwrap(), vq(9, 1, 2));
        let split = SnapshotGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(segment_volume(&split, 0, 3, &q(0, 1), &q(1, 1)).unwrap(), V::zero());
    }

    #[test]
    fn table_lookups_match_direct_queries() {
        let s = fig1();
        let src = tn(&s, 0, 1, "a");
        let table = sweep(&s, &src, &q(32, 1)).unwrap();
        for t in [q(0, 1), q(7, 2), q(9, 1), q(35, 2), q(23, 1), q(32, 1)] {
            for w in 0..s.node_count() {
                let dst = TemporalNode::new(t.clone(), w);
                assert_eq!(table.get(&s, &dst).unwrap(), vsp(&s, &src, &dst).unwrap());
            }
        }
        assert!(table.get(&s, &TemporalNode::new(q(-1, 1), 0)).is_err());
    }

    #[test]
    fn distances_never_increase_along_the_sweep() {
        let s = fig1();
        for u in 0..s.node_count() {
            let table = DistVolTable::distances(&s, &TemporalNode::new(q(0, 1), u), &q(32, 1)).unwrap();
            for pair in table.frames.windows(2) {
                for w in 0..s.node_count() {
                    if let Some(before) = pair[0].dist[w] {
                        assert!(pair[1].dist[w].is_some_and(|after| after <= before));
                    }
                }
            }
        }
    }
}
