//! Dynamic programming over the slots of a time lattice.
//!
//! With step `h`, the instants `k h` are the lattice points and the open
//! intervals `]k h, (k + 1) h[` the cells. Once every event time is a lattice
//! point, each cell sits inside one gap, so a run of `g` crossings inside a
//! cell, in a fixed order, occupies an ordered simplex of measure
//! `h^g / g!`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use linkstream_bc::{NodeId, Slot, Stream, Time};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::bfs::Apsp;
use crate::{OracleError, Result};

/// Crossings may happen at lattice points only, or inside cells as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Points,
    Cells,
}

/// Involvement of `(time, node)` in a path from `ends.0` to `ends.1`.
pub(crate) struct Track {
    pub time: i64,
    pub node: NodeId,
    pub ends: (NodeId, NodeId),
}

/// `(dimension, involves the tracked node)` to weight.
pub(crate) type Weights = BTreeMap<(usize, bool), Time>;

/// Shortest paths reaching one node: their length and weights.
#[derive(Clone, Debug)]
pub(crate) struct Reach {
    pub length: usize,
    pub weights: Weights,
}

pub(crate) struct Lattice<'s> {
    stream: &'s Stream,
    step: Time,
    events: HashSet<i64>,
    pub lo: i64,
    pub hi: i64,
    cache: RefCell<HashMap<Slot, Rc<Apsp>>>,
}

fn index_of(t: &Time, step: &Time, what: &'static str) -> Result<i64> {
    let k = t / step;
    if !k.is_integer() {
        return Err(OracleError::OffGrid {
            what,
            time: t.to_string(),
            step: step.to_string(),
        });
    }
    i64::try_from(k.to_integer()).map_err(|_| OracleError::TooFine)
}

impl<'s> Lattice<'s> {
    pub(crate) fn new(stream: &'s Stream, step: Time) -> Result<Self> {
        if step <= Time::zero() {
            return Err(OracleError::Step);
        }
        let mut events = HashSet::new();
        for t in stream.event_times() {
            events.insert(index_of(t, &step, "event time")?);
        }
        let lo = index_of(stream.alpha(), &step, "alpha")?;
        let hi = index_of(stream.omega(), &step, "omega")?;
        Ok(Lattice {
            stream,
            step,
            events,
            lo,
            hi,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub(crate) fn index(&self, t: &Time, what: &'static str) -> Result<i64> {
        self.stream.check_time(t)?;
        index_of(t, &self.step, what)
    }

    pub(crate) fn time(&self, k: i64) -> Time {
        Time::from_integer(BigInt::from(k)) * &self.step
    }

    pub(crate) fn is_event(&self, k: i64) -> bool {
        self.events.contains(&k)
    }

    fn apsp(&self, t: &Time) -> Rc<Apsp> {
        let slot = self.stream.slot(t);
        let mut cache = self.cache.borrow_mut();
        let found = cache
            .entry(slot)
            .or_insert_with(|| Rc::new(Apsp::new(self.stream.graph(slot))));
        Rc::clone(found)
    }

    fn point(&self, k: i64) -> Rc<Apsp> {
        self.apsp(&self.time(k))
    }

    fn cell(&self, k: i64) -> Rc<Apsp> {
        let half = Time::new(BigInt::one(), BigInt::from(2));
        self.apsp(&((Time::from_integer(BigInt::from(k)) + half) * &self.step))
    }

    /// Paths from `(from, u)` to every node by lattice point `to`, keeping
    /// the shortest ones per node.
    pub(crate) fn walk(&self, u: NodeId, from: i64, to: i64, mode: Mode, track: Option<&Track>) -> Vec<Option<Reach>> {
        let n = self.stream.node_count();
        let mut states: Vec<Option<Reach>> = vec![None; n];
        states[u] = Some(Reach {
            length: 0,
            weights: BTreeMap::from([((0, false), Time::one())]),
        });
        for k in from..=to {
            let here = track.filter(|t| t.time == k);
            states = advance(&states, &self.point(k), false, here);
            if k < to && mode == Mode::Cells {
                states = advance(&states, &self.cell(k), true, None);
            }
        }
        states
    }

    /// Earliest lattice point at which each node is reached from
    /// `(from, u)`, looking no further than `to`.
    pub(crate) fn arrivals(&self, u: NodeId, from: i64, to: i64) -> Vec<Option<i64>> {
        let n = self.stream.node_count();
        let mut reached = vec![None; n];
        reached[u] = Some(from);
        let mut left = n - 1;
        let mut k = from;
        while left > 0 && k <= to {
            let graph = self.stream.graph(self.stream.slot(&self.time(k)));
            let mut queue: VecDeque<NodeId> = (0..n).filter(|&x| reached[x].is_some()).collect();
            while let Some(x) = queue.pop_front() {
                for &y in graph.neighbors(x) {
                    if reached[y].is_none() {
                        reached[y] = Some(k);
                        left -= 1;
                        queue.push_back(y);
                    }
                }
            }
            k += 1;
        }
        reached
    }
}

fn inverse_factorial(g: usize) -> Time {
    let f: BigUint = (1..=g).map(BigUint::from).product();
    Time::new(BigInt::one(), BigInt::from(f))
}

fn advance(states: &[Option<Reach>], apsp: &Apsp, cell: bool, track: Option<&Track>) -> Vec<Option<Reach>> {
    let n = states.len();
    let mut out = vec![None; n];
    for (to, slot) in out.iter_mut().enumerate() {
        let best = states
            .iter()
            .enumerate()
            .filter_map(|(x, s)| Some(s.as_ref()?.length + apsp.dist(x, to)?))
            .min();
        let Some(best) = best else { continue };
        let mut weights = Weights::new();
        for (x, state) in states.iter().enumerate() {
            let Some(state) = state else { continue };
            let Some(g) = apsp.dist(x, to) else { continue };
            if state.length + g != best {
                continue;
            }
            let sigma = Time::from_integer(BigInt::from(apsp.count(x, to).clone()));
            let (factor, grow) = if cell {
                (&sigma * inverse_factorial(g), g)
            } else {
                (sigma.clone(), 0)
            };
            for (&(dim, flag), w) in &state.weights {
                let Some(t) = track else {
                    *weights.entry((dim + grow, flag)).or_insert_with(Time::zero) += w * &factor;
                    continue;
                };
                // sitting at the node across t, or crossing through it at t
                let waiting = x == t.node && x != t.ends.0 && x != t.ends.1;
                if flag || waiting {
                    *weights.entry((dim, true)).or_insert_with(Time::zero) += w * &sigma;
                    continue;
                }
                let through = if g > 0 {
                    Time::from_integer(BigInt::from(apsp.through(x, t.node, to)))
                } else {
                    Time::zero()
                };
                if !through.is_zero() {
                    *weights.entry((dim, true)).or_insert_with(Time::zero) += w * &through;
                }
                let rest = &sigma - &through;
                if !rest.is_zero() {
                    *weights.entry((dim, false)).or_insert_with(Time::zero) += w * rest;
                }
            }
        }
        *slot = Some(Reach { length: best, weights });
    }
    out
}
