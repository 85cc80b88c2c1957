use num_rational::BigRational;

use crate::stream::LinkStream;

pub(crate) const FIG1: &str = include_str!("../tests/data/fig1.ls");

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn fig1() -> LinkStream<BigRational> {
    LinkStream::parse(FIG1).expect("sample stream parses")
}
