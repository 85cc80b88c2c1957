//! Contribution of a node pair to the betweenness of a temporal node.
//!
//! Only one latency pair `(s, a)` from `u` to `w` can have shortest fastest
//! paths through `(t, v)`. Start times `i` in `]S, s]` and arrival times `j`
//! in `[a, A[` are cut into cells by the starts and arrivals of the latency
//! pairs with the same latency and distance as `(s, a)`. Inside a cell the
//! set of shortest fastest paths from `(i, u)` to `(j, w)` does not change, so
//! the double integral is a finite sum of cell areas times volume ratios.

use crate::error::{Error, Result};
use crate::latency::{LatencyList, LatencyPair};
use crate::scalar::Scalar;
use crate::stream::{LinkStream, Slot, TemporalNode};
use crate::volume::Volume;
use crate::vsp::{temporal_distance, vsp, ShortestPaths};
use crate::NodeId;

/// Source of shortest-path queries on one stream. Implemented by
/// [`LinkStream`] itself (direct sweeps) and by caching evaluators.
pub trait PathQueries<T: Scalar> {
    fn stream(&self) -> &LinkStream<T>;

    fn shortest(&self, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<ShortestPaths<T>>;

    fn distance(&self, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<Option<usize>> {
        Ok(self.shortest(src, dst)?.distance)
    }
}

impl<T: Scalar> PathQueries<T> for LinkStream<T> {
    fn stream(&self) -> &LinkStream<T> {
        self
    }

    fn shortest(&self, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<ShortestPaths<T>> {
        vsp(self, src, dst)
    }

    fn distance(&self, src: &TemporalNode<T>, dst: &TemporalNode<T>) -> Result<Option<usize>> {
        temporal_distance(self, src, dst)
    }
}

/// One entry of a boundary list: a start (or arrival) time and the volume of
/// the shortest fastest paths already accumulated beyond the anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary<T> {
    pub time: T,
    pub volume: Volume<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contribution<T> {
    pub value: T,
    /// The latency pair whose paths involve the temporal node, if any.
    pub anchor: Option<LatencyPair<T>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Backward,
    Forward,
}

fn at<T: Clone>(time: &T, node: NodeId) -> TemporalNode<T> {
    TemporalNode::new(time.clone(), node)
}

/// Whether `u` and `w` are at distance `d` in the open gap just before
/// (backward) or just after (forward) `x`. No such gap exists at the window
/// bounds.
fn gap_distance_is<T: Scalar>(
    stream: &LinkStream<T>,
    dir: Direction,
    x: &T,
    u: NodeId,
    w: NodeId,
    d: Option<usize>,
) -> bool {
    let gap = match dir {
        Direction::Backward if x > stream.alpha() => stream.gap_before(x),
        Direction::Forward if x < stream.omega() => stream.gap_after(x),
        _ => return false,
    };
    stream.all_pairs(Slot::Gap(gap)).distance(u, w) == d
}

fn check_anchor<T: Scalar>(anchor: &LatencyPair<T>, list: &LatencyList<T>) -> Result<()> {
    if list.iter().any(|p| p == anchor) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{anchor} is not in the latency list")))
    }
}

fn boundary_list<T: Scalar, P: PathQueries<T> + ?Sized>(
    paths: &P,
    u: NodeId,
    w: NodeId,
    anchor: &LatencyPair<T>,
    list: &LatencyList<T>,
    dir: Direction,
) -> Result<Vec<Boundary<T>>> {
    check_anchor(anchor, list)?;
    let stream = paths.stream();
    let (s, a) = (&anchor.start, &anchor.arrival);
    let d = paths.distance(&at(s, u), &at(a, w))?;
    if d.is_none() {
        return Err(Error::Precondition(format!("{anchor} does not connect its endpoints")));
    }
    let pivot = if dir == Direction::Backward { s } else { a };
    let mut result = Vec::new();
    if anchor.is_instantaneous() && gap_distance_is(stream, dir, pivot, u, w, d) {
        return Ok(result);
    }
    let latency = anchor.latency();
    let candidates: Box<dyn Iterator<Item = &LatencyPair<T>>> = match dir {
        Direction::Backward => Box::new(list.iter().rev().filter(|p| &p.start < s)),
        Direction::Forward => Box::new(list.iter().filter(|p| &p.arrival > a)),
    };
    let mut vol = Volume::zero();
    for pair in candidates {
        let time = if dir == Direction::Backward {
            &pair.start
        } else {
            &pair.arrival
        };
        let other = pair.latency();
        if other < latency {
            result.push(Boundary {
                time: time.clone(),
                volume: vol,
            });
            return Ok(result);
        }
        if other > latency {
            continue;
        }
        let sp = paths.shortest(&at(&pair.start, u), &at(&pair.arrival, w))?;
        match sp.distance.cmp(&d) {
            std::cmp::Ordering::Less => {
                result.push(Boundary {
                    time: time.clone(),
                    volume: vol,
                });
                return Ok(result);
            }
            std::cmp::Ordering::Equal => {
                result.push(Boundary {
                    time: time.clone(),
                    volume: vol.clone(),
                });
                if pair.is_instantaneous() && gap_distance_is(stream, dir, time, u, w, d) {
                    return Ok(result);
                }
                vol = vol.add(&sp.volume);
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    let end = if dir == Direction::Backward {
        stream.alpha()
    } else {
        stream.omega()
    };
    result.push(Boundary {
        time: end.clone(),
        volume: vol,
    });
    Ok(result)
}

/// Starts `s_-1 > s_-2 > ... > S` of the latency pairs preceding `anchor`
/// with the same latency and distance, each with the volume of the paths of
/// the pairs strictly between it and the anchor.
pub fn prev_list<T: Scalar>(
    stream: &LinkStream<T>,
    u: NodeId,
    w: NodeId,
    anchor: &LatencyPair<T>,
    list: &LatencyList<T>,
) -> Result<Vec<Boundary<T>>> {
    prev_list_with(stream, u, w, anchor, list)
}

/// Arrivals `a_1 < a_2 < ... < A`, the mirror image of [`prev_list`].
pub fn next_list<T: Scalar>(
    stream: &LinkStream<T>,
    u: NodeId,
    w: NodeId,
    anchor: &LatencyPair<T>,
    list: &LatencyList<T>,
) -> Result<Vec<Boundary<T>>> {
    next_list_with(stream, u, w, anchor, list)
}

pub fn prev_list_with<T: Scalar, P: PathQueries<T> + ?Sized>(
    paths: &P,
    u: NodeId,
    w: NodeId,
    anchor: &LatencyPair<T>,
    list: &LatencyList<T>,
) -> Result<Vec<Boundary<T>>> {
    boundary_list(paths, u, w, anchor, list, Direction::Backward)
}

pub fn next_list_with<T: Scalar, P: PathQueries<T> + ?Sized>(
    paths: &P,
    u: NodeId,
    w: NodeId,
    anchor: &LatencyPair<T>,
    list: &LatencyList<T>,
) -> Result<Vec<Boundary<T>>> {
    boundary_list(paths, u, w, anchor, list, Direction::Forward)
}

/// Finds the latency pair whose paths can involve `tv`, returning its index
/// in `list` and the volume of its shortest paths through `tv`.
pub fn find_anchor<T: Scalar, P: PathQueries<T> + ?Sized>(
    paths: &P,
    u: NodeId,
    w: NodeId,
    tv: &TemporalNode<T>,
    list: &LatencyList<T>,
) -> Result<Option<(usize, Volume<T>)>> {
    paths.stream().check_temporal_node(tv)?;
    for (k, pair) in list.iter().enumerate() {
        if !pair.contains(&tv.time) {
            continue;
        }
        let (src, dst) = (at(&pair.start, u), at(&pair.arrival, w));
        let Some(to_tv) = paths.distance(&src, tv)? else {
            continue;
        };
        let Some(from_tv) = paths.distance(tv, &dst)? else {
            continue;
        };
        let through = if paths.distance(&src, &dst)? == Some(to_tv + from_tv) {
            paths.shortest(&src, tv)?.volume.mul(&paths.shortest(tv, &dst)?.volume)
        } else {
            Volume::zero()
        };
        return Ok(Some((k, through)));
    }
    Ok(None)
}

/// Everything about an anchor pair that does not depend on the temporal
/// node: its own volume and both boundary lists.
#[derive(Clone, Debug)]
pub struct AnchorCells<T> {
    pub anchor: LatencyPair<T>,
    pub middle: Volume<T>,
    pub prev: Vec<Boundary<T>>,
    pub next: Vec<Boundary<T>>,
}

impl<T: Scalar> AnchorCells<T> {
    pub fn new<P: PathQueries<T> + ?Sized>(
        paths: &P,
        u: NodeId,
        w: NodeId,
        list: &LatencyList<T>,
        index: usize,
    ) -> Result<Self> {
        let anchor = list.pairs()[index].clone();
        let middle = paths.shortest(&at(&anchor.start, u), &at(&anchor.arrival, w))?.volume;
        let prev = prev_list_with(paths, u, w, &anchor, list)?;
        let next = next_list_with(paths, u, w, &anchor, list)?;
        Ok(AnchorCells {
            anchor,
            middle,
            prev,
            next,
        })
    }

    /// Sum over cells of area times the fraction `through / cell volume`.
    pub fn integrate(&self, through: &Volume<T>) -> Result<T> {
        let mut total = T::zero();
        let mut s_hi = self.anchor.start.clone();
        for left in &self.prev {
            let mut a_lo = self.anchor.arrival.clone();
            for right in &self.next {
                let den = left.volume.add(&right.volume).add(&self.middle);
                let area = (s_hi.clone() - left.time.clone()) * (right.time.clone() - a_lo.clone());
                if !area.is_zero() {
                    total = total + area * through.ratio(&den)?;
                }
                a_lo = right.time.clone();
            }
            s_hi = left.time.clone();
        }
        Ok(total)
    }

    /// Total area of the cells, `(s - S)(A - a)`.
    pub fn area(&self) -> T {
        match (self.prev.last(), self.next.last()) {
            (Some(p), Some(n)) => {
                (self.anchor.start.clone() - p.time.clone()) * (n.time.clone() - self.anchor.arrival.clone())
            }
            _ => T::zero(),
        }
    }
}

/// Contribution of `(u, w)` to the betweenness of `tv`, given the latency
/// list from `u` to `w`.
pub fn contribution<T: Scalar>(
    stream: &LinkStream<T>,
    u: NodeId,
    w: NodeId,
    tv: &TemporalNode<T>,
    list: &LatencyList<T>,
) -> Result<Contribution<T>> {
    contribution_with(stream, u, w, tv, list)
}

pub fn contribution_with<T: Scalar, P: PathQueries<T> + ?Sized>(
    paths: &P,
    u: NodeId,
    w: NodeId,
    tv: &TemporalNode<T>,
    list: &LatencyList<T>,
) -> Result<Contribution<T>> {
    paths.stream().check_node(u)?;
    paths.stream().check_node(w)?;
    match find_anchor(paths, u, w, tv, list)? {
        Some((k, through)) if !through.is_zero() => {
            let cells = AnchorCells::new(paths, u, w, list, k)?;
            Ok(Contribution {
                value: cells.integrate(&through)?,
                anchor: Some(cells.anchor),
            })
        }
        _ => Ok(Contribution {
            value: T::zero(),
            anchor: None,
        }),
    }
}

/// Fraction of the shortest fastest paths from `(i, u)` to `(j, w)` that
/// involve `tv`, computed directly from the latency pairs inside `[i, j]`.
/// Zero when no path exists, and also when instantaneous shortest fastest
/// paths exist at a continuum of instants.
pub fn pair_ratio<T: Scalar>(
    stream: &LinkStream<T>,
    u: NodeId,
    w: NodeId,
    tv: &TemporalNode<T>,
    i: &T,
    j: &T,
    list: &LatencyList<T>,
) -> Result<T> {
    stream.check_temporal_node(tv)?;
    stream.check_time(i)?;
    stream.check_time(j)?;
    if i > j {
        return Err(Error::TimeOrder {
            from: i.to_string(),
            to: j.to_string(),
        });
    }
    let mut candidates: Vec<LatencyPair<T>> = list
        .iter()
        .filter(|p| &p.start >= i && &p.arrival <= j)
        .cloned()
        .collect();
    let instant_at_i = stream.all_pairs(stream.slot(i)).distance(u, w);
    if i == j && instant_at_i.is_some() && candidates.is_empty() {
        candidates.push(LatencyPair::new(i.clone(), i.clone()));
    }
    let Some(best) = candidates
        .iter()
        .map(LatencyPair::latency)
        .reduce(|a, b| if b < a { b } else { a })
    else {
        return Ok(T::zero());
    };
    let mut fastest = Vec::new();
    for p in candidates.iter().filter(|p| p.latency() == best) {
        let sp = vsp(stream, &at(&p.start, u), &at(&p.arrival, w))?;
        fastest.push((p, sp));
    }
    let d = fastest.iter().filter_map(|(_, sp)| sp.distance).min();
    if best.is_zero() && i < j {
        // instantaneous paths over a whole gap are uncountable
        let events = stream.event_times();
        for g in stream.gap_before(i)..=stream.gap_after(j) {
            let lo = if g == 0 { stream.alpha() } else { &events[g - 1] };
            let hi = events.get(g).unwrap_or(stream.omega());
            let open_lo = if lo > i { lo } else { i };
            let open_hi = if hi < j { hi } else { j };
            if open_lo < open_hi && stream.all_pairs(Slot::Gap(g)).distance(u, w) == d {
                return Ok(T::zero());
            }
        }
    }
    let mut den = Volume::zero();
    let mut num = Volume::zero();
    for (p, sp) in fastest.iter().filter(|(_, sp)| sp.distance == d) {
        den = den.add(&sp.volume);
        if !p.contains(&tv.time) {
            continue;
        }
        let (src, dst) = (at(&p.start, u), at(&p.arrival, w));
        let to_tv = vsp(stream, &src, tv)?;
        let from_tv = vsp(stream, tv, &dst)?;
        if let (Some(x), Some(y)) = (to_tv.distance, from_tv.distance) {
            if Some(x + y) == d {
                num = num.add(&to_tv.volume.mul(&from_tv.volume));
            }
        }
    }
    Ok(num.ratio(&den)?)
}
