//! Max-plus scalars.
//!
//! A [`TropicalScalar`] is either a finite weight or the bottom element ε
//! (−∞). The weight type is generic: exact rationals are the default, but
//! anything implementing [`Weight`] works, including `f64` for quick
//! experiments where exactness is not required.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, Signed};

/// The ordered field a finite tropical weight lives in.
pub trait Weight:
    Num + Neg<Output = Self> + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync
{
    /// Embeds a count (walk length, node count) into the field.
    fn from_count(n: usize) -> Self;

    /// Largest integer not greater than `self`.
    fn floor(&self) -> Self;
}

impl<I> Weight for Ratio<I>
where
    I: Integer + Signed + Clone + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync,
{
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(I::from_usize(n).expect("count does not fit the integer type"))
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }
}

macro_rules! float_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            fn from_count(n: usize) -> Self {
                n as $t
            }

            fn floor(&self) -> Self {
                Float::floor(*self)
            }
        }
    )*};
}

float_weight!(f32, f64);

/// An element of ℝ ∪ {−∞} under (max, +).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TropicalScalar<T> {
    /// The additive identity ε = −∞.
    Epsilon,
    Finite(T),
}

pub use TropicalScalar::{Epsilon, Finite};

impl<T: Weight> TropicalScalar<T> {
    /// Tropical zero, ε.
    pub fn epsilon() -> Self {
        Epsilon
    }

    /// Tropical one, the finite weight 0.
    pub fn unit() -> Self {
        Finite(T::zero())
    }

    pub fn finite(value: T) -> Self {
        Finite(value)
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Epsilon)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Epsilon => None,
            Finite(v) => Some(v),
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Epsilon => None,
            Finite(v) => Some(v),
        }
    }

    /// a ⊕ b = max(a, b).
    pub fn oplus(&self, other: &Self) -> Self {
        if self.tropical_cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// a ⊗ b = a + b, with ε absorbing.
    pub fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.clone() + b.clone()),
            _ => Epsilon,
        }
    }

    /// In-place `self = self ⊕ other`. Returns true if `self` changed.
    pub fn oplus_assign(&mut self, other: Self) -> bool {
        if self.tropical_cmp(&other) == Ordering::Less {
            *self = other;
            true
        } else {
            false
        }
    }

    /// Total order with ε below every finite value.
    ///
    /// Incomparable finite values (NaN for floats) compare as equal.
    pub fn tropical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Epsilon, Epsilon) => Ordering::Equal,
            (Epsilon, Finite(_)) => Ordering::Less,
            (Finite(_), Epsilon) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
        }
    }
}

impl<T: Weight> PartialOrd for TropicalScalar<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            _ => Some(self.tropical_cmp(other)),
        }
    }
}

impl<T> From<T> for TropicalScalar<T> {
    fn from(value: T) -> Self {
        Finite(value)
    }
}

impl<T: fmt::Display> fmt::Display for TropicalScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon => f.write_str("-inf"),
            Finite(v) => v.fmt(f),
        }
    }
}

/// Free-function form of [`TropicalScalar::oplus`].
pub fn oplus<T: Weight>(a: &TropicalScalar<T>, b: &TropicalScalar<T>) -> TropicalScalar<T> {
    a.oplus(b)
}

/// Free-function form of [`TropicalScalar::otimes`].
pub fn otimes<T: Weight>(a: &TropicalScalar<T>, b: &TropicalScalar<T>) -> TropicalScalar<T> {
    a.otimes(b)
}
