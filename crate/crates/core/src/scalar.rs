//! Scalar abstraction for times and volume sizes.
//!
//! Every algorithm in this crate only needs field arithmetic and a total
//! order on the values it actually produces, so the core is written against
//! [`Scalar`]. Exact results come from [`BigRational`]; `f64`/`f32` are
//! available for quick approximate runs.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Numeric type used for time instants, durations and volume sizes.
pub trait Scalar: num_traits::Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Converts an exact rational into this scalar (rounding for floats).
    fn from_rational(value: &BigRational) -> Self;

    /// Approximate value, used for decimal rendering and diagnostics.
    fn to_f64(&self) -> f64;

    /// Whether arithmetic on this type is exact.
    fn is_exact() -> bool;

    /// `true` when `self` is larger than `other` beyond rounding noise.
    fn exceeds(&self, other: &Self) -> bool {
        self > other
    }

    fn from_count(count: &BigUint) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(count.clone())))
    }

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Parses a time literal: optional sign, then `12`, `4.5` or `9/2`.
    fn parse_literal(text: &str) -> Option<Self> {
        parse_rational(text).map(|r| Self::from_rational(&r))
    }
}

impl Scalar for BigRational {
    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(value: &BigRational) -> Self {
                ToPrimitive::to_f64(value).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }

            fn exceeds(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                self - other > scale * 64.0 * <$t>::EPSILON
            }

            fn from_count(count: &BigUint) -> Self {
                count.to_f64().unwrap_or(f64::INFINITY) as $t
            }

            fn from_usize(n: usize) -> Self {
                n as $t
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Total order on scalars. Panics on NaN, which parsing never produces.
pub fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("scalar values must be totally ordered")
}

/// Parses `[+-]digits[.digits]` or `[+-]p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num)?;
        let den = parse_digits(den)?;
        if den.is_zero() {
            return None;
        }
        BigRational::new(num, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        let int = if int.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(int)?
        };
        let frac_digits = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac)?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        BigRational::new(int * &scale + frac_digits, scale)
    } else {
        BigRational::from_integer(parse_digits(body)?)
    };
    Some(if negative { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders an exact rational with `digits` fractional digits, rounding half
/// away from zero.
pub fn format_decimal(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = value * BigRational::from_integer(scale.clone());
    let magnitude = scaled.abs();
    let (quot, rem) = magnitude.numer().div_rem(magnitude.denom());
    let twice = rem * 2u32;
    let rounded = if &twice >= magnitude.denom() {
        quot + BigInt::one()
    } else {
        quot
    };
    let negative = value.is_negative() && !rounded.is_zero();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let (int, frac) = rounded.div_rem(&scale);
    out.push_str(&int.to_string());
    if digits > 0 {
        let frac = frac.to_biguint().unwrap_or_default().to_string();
        out.push('.');
        out.extend(std::iter::repeat_n('0', digits - frac.len()));
        out.push_str(&frac);
    }
    out
}

/// Largest positive rational dividing every value (the lattice step of a set
/// of rationals). Returns `None` when all values are zero or the set is empty.
pub fn lattice_step<'a, I>(values: I) -> Option<BigRational>
where
    I: IntoIterator<Item = &'a BigRational>,
{
    // gcd(a/b, c/d) = gcd(a, c) / lcm(b, d)
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        None
    } else {
        debug_assert_eq!(num.sign(), Sign::Plus);
        Some(BigRational::new(num, den))
    }
}
