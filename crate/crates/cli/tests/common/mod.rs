#![allow(dead_code)]

use linkstream_bc::{Node, Stream, Time};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn q(n: i64, d: i64) -> Time {
    Time::new(BigInt::from(n), BigInt::from(d))
}

pub fn fig1() -> Stream {
    Stream::parse(include_str!("../data/fig1.ls")).unwrap()
}

/// Up to 5 nodes and 8 link segments with integer bounds in [0, 20].
pub fn random_stream(rng: &mut ChaCha8Rng) -> Stream {
    let nodes = rng.gen_range(2..=5);
    let mut b = Stream::builder(q(0, 1), q(20, 1)).unwrap();
    for name in &NAMES[..nodes] {
        b.add_node(name);
    }
    for _ in 0..rng.gen_range(1..=8) {
        let u = rng.gen_range(0..nodes);
        let v = (u + rng.gen_range(1..nodes)) % nodes;
        let start = rng.gen_range(0..=20);
        let end = (start + rng.gen_range(0..=4)).min(20);
        b.add_link(NAMES[u], NAMES[v], q(start, 1), q(end, 1)).unwrap();
    }
    b.build().unwrap()
}

/// A temporal node at an integer or half-integer time.
pub fn random_node(rng: &mut ChaCha8Rng, s: &Stream) -> Node {
    Node::new(q(rng.gen_range(0..=40), 2), rng.gen_range(0..s.node_count()))
}
