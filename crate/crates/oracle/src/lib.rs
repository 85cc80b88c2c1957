//! Brute-force grid oracle for link-stream betweenness.
//!
//! Time is cut into a lattice of step `δ` that holds every event time. Paths
//! are enumerated by dynamic programming over `(lattice slot, node)`
//! states, with their own BFS on each snapshot; nothing here goes through
//! the volume arithmetic or the sweeps of `linkstream-bc`.
//!
//! Two counts come out of the same enumeration. The lattice count only lets
//! paths cross at lattice points, so `count · δ^dim` converges to the volume
//! as `δ` shrinks. The cell measure also lets crossings fall inside the open
//! cells between lattice points and weighs them by the measure of the
//! ordered crossing times, which is exact on any lattice that holds the
//! event times.

mod bfs;
mod walk;

use std::collections::BTreeMap;

use linkstream_bc::{Node, NodeId, Stream, Time};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use walk::{Lattice, Mode, Track};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("grid step must be positive")]
    Step,
    #[error("{what} {time} is not a multiple of the grid step {step}")]
    OffGrid {
        what: &'static str,
        time: String,
        step: String,
    },
    #[error("grid is too fine for 64-bit lattice indices")]
    TooFine,
    #[error(transparent)]
    Stream(#[from] linkstream_bc::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// A uniform time grid `δ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    step: Time,
}

impl GridSpec {
    pub fn new(step: Time) -> Result<Self> {
        if step <= Time::zero() {
            return Err(OracleError::Step);
        }
        Ok(GridSpec { step })
    }

    /// `δ = 1 / denominator`.
    pub fn unit_fraction(denominator: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(OracleError::Step);
        }
        GridSpec::new(Time::new(BigInt::one(), BigInt::from(denominator)))
    }

    pub fn step(&self) -> &Time {
        &self.step
    }

    fn half(&self) -> Time {
        &self.step / Time::from_integer(BigInt::from(2))
    }
}

/// Minimal-length grid paths between two temporal nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPaths {
    /// Minimal length, `None` when unreachable.
    pub length: Option<usize>,
    /// Number of minimal-length paths crossing at lattice points only.
    pub count: BigUint,
    /// Top dimension of the minimal-length paths.
    pub dimension: usize,
    /// Their measure in units of `δ^dimension`.
    pub weight: Time,
    pub step: Time,
}

impl GridPaths {
    /// `count · δ^dim`.
    pub fn lattice_estimate(&self, dim: usize) -> Time {
        Time::from_integer(BigInt::from(self.count.clone())) * Pow::pow(&self.step, dim)
    }

    /// The cell measure of the top dimension.
    pub fn size(&self) -> Time {
        &self.weight * Pow::pow(&self.step, self.dimension)
    }
}

/// Counts the minimal-length paths from `src` to `dst` on the grid.
pub fn grid_count_shortest(stream: &Stream, src: &Node, dst: &Node, grid: &GridSpec) -> Result<GridPaths> {
    let lat = Lattice::new(stream, grid.step.clone())?;
    stream.check_node(src.node)?;
    stream.check_node(dst.node)?;
    let (i, j) = (
        lat.index(&src.time, "source time")?,
        lat.index(&dst.time, "target time")?,
    );
    let mut out = GridPaths {
        length: None,
        count: BigUint::zero(),
        dimension: 0,
        weight: Time::zero(),
        step: grid.step.clone(),
    };
    if i > j {
        return Ok(out);
    }
    let Some(points) = lat.walk(src.node, i, j, Mode::Points, None).swap_remove(dst.node) else {
        return Ok(out);
    };
    let cells = lat
        .walk(src.node, i, j, Mode::Cells, None)
        .swap_remove(dst.node)
        .expect("cell paths include lattice paths");
    debug_assert_eq!(points.length, cells.length);
    out.length = Some(points.length);
    let total: Time = points.weights.values().sum();
    out.count = total.to_integer().to_biguint().expect("counts are non-negative");
    let (&(dim, _), _) = cells.weights.iter().next_back().expect("a reached node has paths");
    out.dimension = dim;
    out.weight = cells.weights.range((dim, false)..).map(|(_, w)| w).sum();
    Ok(out)
}

/// Smallest duration of a grid path leaving `src.node` at or after
/// `src.time` and reaching `dst.node` by `dst.time`.
pub fn grid_fastest(stream: &Stream, src: &Node, dst: &Node, grid: &GridSpec) -> Result<Option<Time>> {
    let lat = Lattice::new(stream, grid.step.clone())?;
    stream.check_node(src.node)?;
    stream.check_node(dst.node)?;
    let (i, j) = (
        lat.index(&src.time, "source time")?,
        lat.index(&dst.time, "target time")?,
    );
    let best = (i..=j)
        .filter_map(|s| Some(lat.arrivals(src.node, s, j)[dst.node]? - s))
        .min();
    Ok(best.map(|d| lat.time(d)))
}

/// A latency pair on the path lattice with the shortest paths it carries.
struct Pair {
    start: i64,
    arrival: i64,
    length: usize,
    // instantaneous inside a gap: one of a continuum of pairs
    open: bool,
    // dimension to (all, involving tv)
    weights: BTreeMap<usize, (Time, Time)>,
}

fn arrival_table(lat: &Lattice<'_>, u: NodeId, from: i64, to: i64) -> Vec<Vec<Option<i64>>> {
    (from..=to).map(|s| lat.arrivals(u, s, to)).collect()
}

fn latency_pairs(lat: &Lattice<'_>, table: &[Vec<Option<i64>>], from: i64, track: &Track) -> Vec<Pair> {
    let (u, w) = track.ends;
    let mut pairs = Vec::new();
    for (k, row) in table.iter().enumerate() {
        let Some(a) = row[w] else { continue };
        if table.get(k + 1).and_then(|next| next[w]) == Some(a) {
            continue;
        }
        let s = from + k as i64;
        let reach = lat
            .walk(u, s, a, Mode::Cells, Some(track))
            .swap_remove(w)
            .expect("arrival was reached");
        let mut weights: BTreeMap<usize, (Time, Time)> = BTreeMap::new();
        for ((dim, flag), x) in reach.weights {
            let entry = weights.entry(dim).or_insert_with(|| (Time::zero(), Time::zero()));
            entry.0 += &x;
            if flag {
                entry.1 += x;
            }
        }
        pairs.push(Pair {
            start: s,
            arrival: a,
            length: reach.length,
            open: s == a && !lat.is_event(s),
            weights,
        });
    }
    pairs
}

/// Shortest fastest paths over a growing set of latency pairs.
#[derive(Default)]
struct Aggregate {
    latency: Option<i64>,
    length: usize,
    open: bool,
    weights: BTreeMap<usize, (Time, Time)>,
}

impl Aggregate {
    fn add(&mut self, p: &Pair) -> bool {
        let key = (p.arrival - p.start, p.length);
        match self.latency.map(|l| (l, self.length)) {
            Some(cur) if key > cur => return false,
            Some(cur) if key == cur => {}
            _ => {
                *self = Aggregate {
                    latency: Some(key.0),
                    length: key.1,
                    ..Aggregate::default()
                };
            }
        }
        self.open |= p.open;
        for (&dim, (all, tv)) in &p.weights {
            let entry = self.weights.entry(dim).or_insert_with(|| (Time::zero(), Time::zero()));
            entry.0 += all;
            entry.1 += tv;
        }
        true
    }

    fn ratio(&self, window_is_open: bool) -> Time {
        if self.latency.is_none() || (self.open && window_is_open) {
            return Time::zero();
        }
        match self.weights.values().rev().find(|(all, _)| !all.is_zero()) {
            Some((all, tv)) => tv / all,
            None => Time::zero(),
        }
    }
}

fn tracked(lat: &Lattice<'_>, stream: &Stream, u: NodeId, w: NodeId, tv: &Node) -> Result<Track> {
    stream.check_node(u)?;
    stream.check_node(w)?;
    stream.check_node(tv.node)?;
    Ok(Track {
        time: lat.index(&tv.time, "temporal node time")?,
        node: tv.node,
        ends: (u, w),
    })
}

/// Ratio of the shortest fastest paths from `(i, u)` to `(j, w)` that
/// involve `tv`. Paths are enumerated on the lattice of step `δ / 2`.
pub fn grid_pair_ratio(
    stream: &Stream,
    u: NodeId,
    w: NodeId,
    tv: &Node,
    i: &Time,
    j: &Time,
    grid: &GridSpec,
) -> Result<Time> {
    let lat = Lattice::new(stream, grid.half())?;
    let track = tracked(&lat, stream, u, w, tv)?;
    let (i, j) = (lat.index(i, "source time")?, lat.index(j, "target time")?);
    if u == w || i > j {
        return Ok(Time::zero());
    }
    let table = arrival_table(&lat, u, i, j);
    let mut agg = Aggregate::default();
    for p in latency_pairs(&lat, &table, i, &track) {
        agg.add(&p);
    }
    Ok(agg.ratio(i < j))
}

fn riemann(lat: &Lattice<'_>, table: &[Vec<Option<i64>>], from: i64, to: i64, track: &Track, step: &Time) -> Time {
    let pairs = latency_pairs(lat, table, from, track);
    // cells of side δ = 2 h, sampled at their centres
    let (c0, c1) = (from / 2, to / 2);
    let mut total = Time::zero();
    let mut lo = 0;
    for ci in c0..c1 {
        let i = 2 * ci + 1;
        while lo < pairs.len() && pairs[lo].start < i {
            lo += 1;
        }
        let mut agg = Aggregate::default();
        let mut next = lo;
        let mut ratio = Time::zero();
        for cj in ci + 1..c1 {
            let j = 2 * cj + 1;
            let mut changed = false;
            while next < pairs.len() && pairs[next].arrival <= j {
                changed |= agg.add(&pairs[next]);
                next += 1;
            }
            if changed {
                ratio = agg.ratio(true);
            }
            total += &ratio;
        }
    }
    total * step * step
}

/// Midpoint Riemann sum of [`grid_pair_ratio`] over the `δ × δ` cells of
/// `window × window` (the whole stream by default). Cells on the diagonal
/// contribute nothing: inside them the window lies within one gap.
pub fn grid_contribution(
    stream: &Stream,
    u: NodeId,
    w: NodeId,
    tv: &Node,
    grid: &GridSpec,
    window: Option<(&Time, &Time)>,
) -> Result<Time> {
    let lat = Lattice::new(stream, grid.half())?;
    let track = tracked(&lat, stream, u, w, tv)?;
    let (from, to) = window_bounds(stream, grid, window)?;
    if u == w {
        return Ok(Time::zero());
    }
    let table = arrival_table(&lat, u, from, to);
    Ok(riemann(&lat, &table, from, to, &track, &grid.step))
}

fn window_bounds(stream: &Stream, grid: &GridSpec, window: Option<(&Time, &Time)>) -> Result<(i64, i64)> {
    // cells of side δ must tile the window
    let full = Lattice::new(stream, grid.step.clone())?;
    let (a, b) = match window {
        Some((a, b)) => (full.index(a, "window start")?, full.index(b, "window end")?),
        None => (full.lo, full.hi),
    };
    Ok((2 * a, 2 * b.max(a)))
}

/// Sum of [`grid_contribution`] over all ordered node pairs.
pub fn grid_betweenness(stream: &Stream, tv: &Node, grid: &GridSpec) -> Result<Time> {
    let lat = Lattice::new(stream, grid.half())?;
    stream.check_node(tv.node)?;
    let time = lat.index(&tv.time, "temporal node time")?;
    let (from, to) = window_bounds(stream, grid, None)?;
    let mut total = Time::zero();
    for u in 0..stream.node_count() {
        let table = arrival_table(&lat, u, from, to);
        for w in (0..stream.node_count()).filter(|&w| w != u) {
            let track = Track {
                time,
                node: tv.node,
                ends: (u, w),
            };
            total += riemann(&lat, &table, from, to, &track, &grid.step);
        }
    }
    Ok(total)
}
