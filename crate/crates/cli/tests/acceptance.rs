//! Acceptance criteria, one line per check.
//!
//! Run with `cargo test --test acceptance`. A check listed in `UNATTAINABLE`
//! is expected to fail: its target value is wrong for the stream it is
//! stated on. The run fails when any other check fails, or when one of
//! those starts passing.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{fig1, q, random_node, random_stream};
use linkstream_bc::{
    betweenness, contribution, latency, latency_lists, pair_ratio, profile, temporal_distance, vsp, Evaluator, Node,
    Stream, Time, Vol,
};
use linkstream_bc_oracle::{grid_betweenness, grid_count_shortest, GridSpec};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
const PROFILE_BUDGET: Duration = Duration::from_secs(60);
const LATTICE_TOLERANCE: f64 = 0.05;
const BETWEENNESS_TOLERANCE: f64 = 0.03;
const ORACLE_STREAMS: usize = 50;
const ORACLE_PAIRS: usize = 10;
const INVARIANCE_STREAMS: usize = 20;
const PROFILE_SAMPLES: usize = 1000;

const UNATTAINABLE: &[&str] = &["2.latency", "3.ratio(4.5,c)", "4.lattice-5%"];

struct Report {
    results: Vec<(String, bool)>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        println!("{} {id}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
        self.results.push((id.to_string(), ok));
    }
}

fn node(s: &Stream, t: (i64, i64), name: &str) -> Node {
    s.temporal_node(q(t.0, t.1), name).unwrap()
}

fn to_f64(x: &Time) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

fn golden_volumes(r: &mut Report) {
    let s = fig1();
    let cases = [
        (0, 14, (4, 1), 4),
        (4, 17, (2, 1), 2),
        (12, 26, (1, 1), 2),
        (20, 32, (11, 2), 4),
        (0, 18, (2, 1), 2),
        (0, 23, (5, 1), 2),
        (0, 26, (3, 1), 3),
        (0, 32, (8, 1), 3),
    ];
    let start = Instant::now();
    let got: Vec<Vol> = cases
        .iter()
        .map(|&(i, j, _, _)| vsp(&s, &node(&s, (i, 1), "a"), &node(&s, (j, 1), "e")).unwrap().volume)
        .collect();
    let elapsed = start.elapsed();
    for (&(i, j, (n, d), dim), v) in cases.iter().zip(&got) {
        let ok = v == &Vol::new(q(n, d), dim);
        r.check(
            &format!("1.vsp({i},a)->({j},e)"),
            ok,
            format!("{v}, expected ({}, {dim})", q(n, d)),
        );
    }
    r.check(
        "1.runtime",
        elapsed < GOLDEN_BUDGET,
        format!("{elapsed:?} for eight queries, budget {GOLDEN_BUDGET:?}"),
    );
}

fn golden_latencies(r: &mut Report) {
    let s = fig1();
    let (src, dst) = (node(&s, (0, 1), "a"), node(&s, (32, 1), "e"));
    let d = temporal_distance(&s, &src, &dst).unwrap();
    r.check("2.distance", d == Some(3), format!("{d:?}, expected Some(3)"));
    let lat = latency(&s, &src, &dst).unwrap();
    r.check(
        "2.latency",
        lat == Some(q(7, 1)),
        format!(
            "{}, expected 7 (a,24,b,25,c,27,d,30,e takes 6)",
            lat.map_or("none".into(), |x| x.to_string())
        ),
    );
    let id = |n| s.node_id(n).unwrap();
    let ae = latency_lists(&s, id("a")).unwrap()[id("e")].to_string();
    r.check("2.LL_a[e]", ae == "(2,9) (9,16) (16,23) (24,30)", &ae);
    let bd = latency_lists(&s, id("b")).unwrap()[id("d")].to_string();
    r.check("2.LL_b[d]", bd == "(5,6) (12,12) (14,14) (19,19) (27,27) (28,28)", &bd);
}

fn golden_ratios(r: &mut Report) {
    let s = fig1();
    let (a, e) = (s.node_id("a").unwrap(), s.node_id("e").unwrap());
    let list = &latency_lists(&s, a).unwrap()[e];
    let cases = [
        ("4.5", (9, 2), "c", 1),
        ("8", (8, 1), "d", 1),
        ("7.5", (15, 2), "c", 0),
        ("10", (10, 1), "b", 0),
        ("10", (10, 1), "c", 0),
        ("14", (14, 1), "d", 0),
    ];
    for (label, t, v, expected) in cases {
        let tv = node(&s, t, v);
        let got = pair_ratio(&s, a, e, &tv, &q(0, 1), &q(18, 1), list).unwrap();
        r.check(
            &format!("3.ratio({label},{v})"),
            got == q(expected, 1),
            format!("{got}, expected {expected}"),
        );
    }
}

fn oracle_equivalence(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let coarse = GridSpec::unit_fraction(8).unwrap();
    let fine = GridSpec::unit_fraction(16).unwrap();
    let start = Instant::now();
    let (mut pairs, mut reachable) = (0, 0);
    let (mut length_ok, mut dim_ok, mut exact_ok, mut shrink_ok) = (true, true, true, true);
    let (mut within, mut worst) = (0usize, 0f64);
    for _ in 0..ORACLE_STREAMS {
        let s = random_stream(&mut rng);
        for _ in 0..ORACLE_PAIRS {
            let (mut x, mut y) = (random_node(&mut rng, &s), random_node(&mut rng, &s));
            if x.time > y.time {
                std::mem::swap(&mut x, &mut y);
            }
            pairs += 1;
            let exact = vsp(&s, &x, &y).unwrap();
            let c = grid_count_shortest(&s, &x, &y, &coarse).unwrap();
            let f = grid_count_shortest(&s, &x, &y, &fine).unwrap();
            length_ok &= c.length == exact.distance && f.length == exact.distance;
            let Some(_) = exact.distance else { continue };
            reachable += 1;
            let dim = exact.volume.dim();
            dim_ok &= c.dimension == dim && f.dimension == dim;
            exact_ok &= &c.size() == exact.volume.size() && &f.size() == exact.volume.size();
            let size = exact.volume.size();
            let err = |g: &linkstream_bc_oracle::GridPaths| to_f64(&((g.lattice_estimate(dim) - size) / size).abs());
            let (ec, ef) = (err(&c), err(&f));
            worst = worst.max(ec);
            if ec < LATTICE_TOLERANCE {
                within += 1;
            }
            shrink_ok &= if ec > 0.0 { ef < ec } else { ef == 0.0 };
        }
    }
    let elapsed = start.elapsed();
    r.check(
        "4.length",
        length_ok,
        format!("grid shortest length = vsp distance on {pairs} pairs"),
    );
    r.check(
        "4.dimension",
        dim_ok,
        format!("grid top dimension = vsp dimension on {reachable} reachable pairs"),
    );
    r.check(
        "4.cell-measure",
        exact_ok,
        "cell-weighted grid measure = vsp size exactly at 1/8 and 1/16",
    );
    r.check(
        "4.lattice-5%",
        within == reachable,
        format!(
            "count*d^dim within 5% of vsp size at d=1/8 on {within}/{reachable} pairs, worst {:.1}%",
            100.0 * worst
        ),
    );
    r.check(
        "4.lattice-shrinks",
        shrink_ok,
        "lattice error strictly smaller at d=1/16 than at 1/8 on every pair",
    );
    r.check(
        "4.runtime",
        elapsed < ORACLE_BUDGET,
        format!("{elapsed:?}, budget {ORACLE_BUDGET:?}"),
    );
}

fn full_betweenness(r: &mut Report) {
    let s = fig1();
    let grid = GridSpec::unit_fraction(8).unwrap();
    for (t, v) in [((9, 2), "c"), ((10, 1), "c"), ((16, 1), "d")] {
        let tv = node(&s, t, v);
        let exact = betweenness(&s, &tv).unwrap();
        let oracle = grid_betweenness(&s, &tv, &grid).unwrap();
        let ok = if oracle.is_zero() {
            exact.is_zero()
        } else {
            to_f64(&((&exact - &oracle) / &oracle).abs()) <= BETWEENNESS_TOLERANCE
        };
        r.check(
            &format!("5.B({},{v})", q(t.0, t.1)),
            ok,
            format!("{exact} against grid estimate {oracle} at d=1/8"),
        );
    }
}

fn invariance(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut shift, mut scale, mut relabel, mut mirror) = (true, true, true, true);
    let (c_shift, c_scale) = (q(7, 3), q(3, 2));
    for _ in 0..INVARIANCE_STREAMS {
        let s = random_stream(&mut rng);
        let shifted = s.map_times(|t| t + &c_shift).unwrap();
        let scaled = s.map_times(|t| t * &c_scale).unwrap();
        let mirrored = s.map_times(|t| -t).unwrap();
        let renamed = s.relabel(|n| format!("{}", (b'z' - n.as_bytes()[0]) as char)).unwrap();
        let (e, es, ek, em, er) = (
            Evaluator::new(&s),
            Evaluator::new(&shifted),
            Evaluator::new(&scaled),
            Evaluator::new(&mirrored),
            Evaluator::new(&renamed),
        );
        for _ in 0..3 {
            let tv = random_node(&mut rng, &s);
            let b = e.betweenness(&tv).unwrap();
            let moved = |t: Time| Node::new(t, tv.node);
            shift &= es.betweenness(&moved(&tv.time + &c_shift)).unwrap() == b;
            scale &= ek.betweenness(&moved(&tv.time * &c_scale)).unwrap() == &b * &c_scale * &c_scale;
            mirror &= em.betweenness(&moved(-&tv.time)).unwrap() == b;
            let name = s.node_name(tv.node);
            let other = format!("{}", (b'z' - name.as_bytes()[0]) as char);
            let tv2 = Node::new(tv.time.clone(), renamed.node_id(&other).unwrap());
            relabel &= er.betweenness(&tv2).unwrap() == b;
        }
    }
    let n = INVARIANCE_STREAMS;
    r.check(
        "6.time-shift",
        shift,
        format!("B unchanged under t -> t + 7/3 on {n} streams"),
    );
    r.check(
        "6.time-scale",
        scale,
        format!("B scaled by c^2 under t -> 3t/2 on {n} streams"),
    );
    r.check(
        "6.relabel",
        relabel,
        format!("B follows a node renaming on {n} streams"),
    );
    r.check(
        "6.mirror",
        mirror,
        format!("B(t, v) = B'(-t, v) in the time-reversed stream on {n} streams"),
    );
}

fn profile_runtime(r: &mut Report) {
    let s = fig1();
    let start = Instant::now();
    let samples = profile(&s, PROFILE_SAMPLES).unwrap();
    let elapsed = start.elapsed();
    r.check(
        "7.runtime",
        samples.len() == 5005 && elapsed <= PROFILE_BUDGET,
        format!(
            "{} values in {elapsed:?} on one thread, budget {PROFILE_BUDGET:?}",
            samples.len()
        ),
    );
    r.check(
        "7.non-negative",
        samples.iter().all(|x| !x.value.is_negative()),
        "every profile value is >= 0",
    );
    let lists: Vec<_> = (0..s.node_count()).map(|u| latency_lists(&s, u).unwrap()).collect();
    // self pairs are anchored at (t, t) on every event time, on a cell of
    // zero area; they never contribute
    let (mut mismatched, mut self_anchored) = (0, 0);
    for x in &samples {
        let tv = Node::new(x.time.clone(), x.node);
        let n = s.node_count();
        let anchored = |u: usize, w: usize| contribution(&s, u, w, &tv, &lists[u][w]).unwrap().anchor.is_some();
        let any = (0..n).any(|u| (0..n).any(|w| u != w && anchored(u, w)));
        if any == x.value.is_zero() {
            mismatched += 1;
        }
        if !any && (0..n).any(|u| anchored(u, u)) {
            self_anchored += 1;
        }
    }
    r.check(
        "7.zeros",
        mismatched == 0,
        format!(
            "value is 0 exactly when no pair u != w has an anchor; {mismatched} samples differ \
             ({self_anchored} zero samples carry only a self-pair anchor)"
        ),
    );
}

fn volume_laws(r: &mut Report) {
    let v = |n: i64, d: usize| Vol::new(q(n, 1), d);
    let mut ok = true;
    let mut fail = |cond: bool, what: &str| {
        if !cond {
            println!("    volume example failed: {what}");
            ok = false;
        }
    };
    fail(v(2, 2) + v(2, 2) + v(1, 2) == v(5, 2), "(2,2)+(2,2)+(1,2)");
    fail(v(2, 2) + v(2, 3) + v(1, 3) == v(3, 3), "(2,2)+(2,3)+(1,3)");
    fail(Vol::zero() + v(3, 2) == v(3, 2), "zero + v");
    fail(v(2, 2) * v(3, 1) == v(6, 3), "(2,2)*(3,1)");
    fail(v(3, 2) * Vol::unit() == v(3, 2), "v * unit");
    fail(Vol::zero() * v(3, 2) == Vol::zero(), "zero * v");
    fail(v(2, 2).ratio(&v(2, 2)) == Ok(q(1, 1)), "(2,2)/(2,2)");
    fail(v(2, 1).ratio(&v(2, 2)) == Ok(q(0, 1)), "(2,1)/(2,2)");
    fail(v(3, 2).ratio(&v(4, 2)) == Ok(q(3, 4)), "(3,2)/(4,2)");
    fail(v(5, 2).sub(&v(2, 2)) == Ok(v(3, 2)), "(5,2)-(2,2)");
    fail(v(5, 3).sub(&v(2, 2)) == Ok(v(5, 3)), "(5,3)-(2,2)");
    fail(v(4, 1).sub(&v(4, 1)) == Ok(Vol::zero()), "v - v");
    fail(Vol::zero().ratio(&v(4, 1)) == Ok(q(0, 1)), "zero / v");
    fail(v(3, 1).ratio(&v(2, 1)).is_err(), "larger / smaller is an error");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut pick = || Vol::new(q(rng.gen_range(0..6), rng.gen_range(1..4)), rng.gen_range(0..4));
        let (a, b, c) = (pick(), pick(), pick());
        fail(&a + &b == &b + &a, "+ commutes");
        fail((&a + &b) + c.clone() == a.clone() + (&b + &c), "+ associates");
        fail(&a * &b == &b * &a, "* commutes");
        fail((&a * &b) * c.clone() == a.clone() * (&b * &c), "* associates");
        let same = Vol::new(b.size().clone(), a.dim());
        fail(
            &c * &(&a + &same) == &(&c * &a) + &(&c * &same),
            "* distributes over + at one dimension",
        );
        if !a.is_zero() {
            fail(a.ratio(&a) == Ok(q(1, 1)), "v / v");
        }
    }
    r.check("8.volume-laws", ok, "listed examples and laws on 200 random triples");
}

fn main() -> ExitCode {
    let mut r = Report { results: Vec::new() };
    golden_volumes(&mut r);
    golden_latencies(&mut r);
    golden_ratios(&mut r);
    oracle_equivalence(&mut r);
    full_betweenness(&mut r);
    invariance(&mut r);
    profile_runtime(&mut r);
    volume_laws(&mut r);

    let unexpected: Vec<&str> = r
        .results
        .iter()
        .filter(|(id, ok)| !ok != UNATTAINABLE.contains(&id.as_str()))
        .map(|(id, _)| id.as_str())
        .collect();
    let passed = r.results.iter().filter(|(_, ok)| *ok).count();
    println!(
        "{passed}/{} checks pass; expected failures: {}",
        r.results.len(),
        UNATTAINABLE.join(", ")
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
