//! Minimum requirements on jet coefficients.

use std::fmt::Debug;
use std::ops::{Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// Scalar type usable as a jet coefficient: a commutative ring with
/// negation, plus conversion from small integers (needed by formal
/// differentiation, which multiplies by exponents).
///
/// Implemented for `f32`/`f64` and for exact rationals; any type meeting
/// the bounds gets the blanket impl.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Coeff for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + FromPrimitive
        + Send
        + Sync
{
}
