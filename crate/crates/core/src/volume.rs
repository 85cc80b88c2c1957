//! Volumes of uncountable path sets.
//!
//! A set of temporal paths built from sliding intervals is measured by a
//! pair `(size, dim)`: `dim` counts the free crossing times and `size` is the
//! `dim`-dimensional measure. Adding volumes keeps only the highest
//! dimension; multiplying concatenated sets multiplies sizes and adds
//! dimensions. The empty set is canonically `(0, 0)`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("division by the zero volume")]
    DivisionByZero,
    #[error("volume ({num_size}, {num_dim}) is not the volume of a subset of ({den_size}, {den_dim})")]
    NotSubset {
        num_size: String,
        num_dim: usize,
        den_size: String,
        den_dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Volume<T> {
    size: T,
    dim: usize,
}

impl<T: Scalar> Volume<T> {
    /// Builds a volume, normalizing a zero size to the canonical `(0, 0)`.
    pub fn new(size: T, dim: usize) -> Self {
        if size.is_zero() {
            Self::zero()
        } else {
            Volume { size, dim }
        }
    }

    pub fn zero() -> Self {
        Volume {
            size: T::zero(),
            dim: 0,
        }
    }

    /// Volume of a single path whose crossings are all at fixed instants.
    pub fn unit() -> Self {
        Volume { size: T::one(), dim: 0 }
    }

    pub fn size(&self) -> &T {
        &self.size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.size.is_zero()
    }

    /// Volume of a disjoint union.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        match self.dim.cmp(&other.dim) {
            std::cmp::Ordering::Greater => self.clone(),
            std::cmp::Ordering::Less => other.clone(),
            std::cmp::Ordering::Equal => Volume::new(self.size.clone() + other.size.clone(), self.dim),
        }
    }

    /// Volume of the concatenation of two path sets.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Volume::new(self.size.clone() * other.size.clone(), self.dim + other.dim)
    }

    /// Fraction of the paths of `den` that belong to the subset measured by
    /// `self`.
    pub fn ratio(&self, den: &Self) -> Result<T, VolumeError> {
        if den.is_zero() {
            return Err(VolumeError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(T::zero());
        }
        self.check_subset_of(den)?;
        if self.dim < den.dim {
            Ok(T::zero())
        } else {
            Ok(self.size.clone() / den.size.clone())
        }
    }

    /// Volume of `self` minus a subset of volume `other`.
    pub fn sub(&self, other: &Self) -> Result<Self, VolumeError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        other.check_subset_of(self)?;
        Ok(self.add(&Volume {
            size: -other.size.clone(),
            dim: other.dim,
        }))
    }

    fn check_subset_of(&self, sup: &Self) -> Result<(), VolumeError> {
        let too_big = self.dim > sup.dim || (self.dim == sup.dim && self.size.exceeds(&sup.size));
        if too_big {
            Err(VolumeError::NotSubset {
                num_size: self.size.to_string(),
                num_dim: self.dim,
                den_size: sup.size.to_string(),
                den_dim: sup.dim,
            })
        } else {
            Ok(())
        }
    }
}

impl<T: Scalar> Default for Volume<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Add for Volume<T> {
    type Output = Volume<T>;

    fn add(self, rhs: Self) -> Self {
        Volume::add(&self, &rhs)
    }
}

impl<'a, T: Scalar> Add<&'a Volume<T>> for &'a Volume<T> {
    type Output = Volume<T>;

    fn add(self, rhs: &'a Volume<T>) -> Volume<T> {
        Volume::add(self, rhs)
    }
}

impl<T: Scalar> Mul for Volume<T> {
    type Output = Volume<T>;

    fn mul(self, rhs: Self) -> Self {
        Volume::mul(&self, &rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a Volume<T>> for &'a Volume<T> {
    type Output = Volume<T>;

    fn mul(self, rhs: &'a Volume<T>) -> Volume<T> {
        Volume::mul(self, rhs)
    }
}

impl<T: Scalar> Sum for Volume<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, v| acc + v)
    }
}

/// `size dim`, e.g. `11/2 4`.
impl<T: Scalar> fmt::Display for Volume<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.size, self.dim)
    }
}
