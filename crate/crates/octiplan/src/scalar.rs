//! Scalar bound for exact grid coordinates.

use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Signed exact integer scalar: i64 for small fixtures, BigInt for drawings.
pub trait CoordNum:
    num_traits::Signed
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Ord
    + Clone
    + Hash
    + Debug
    + Display
    + 'static
{
    fn from_i64c(v: i64) -> Self {
        Self::from_i64(v).expect("small constant fits any scalar")
    }
}

impl<T> CoordNum for T where
    T: num_traits::Signed
        + num_traits::FromPrimitive
        + num_traits::ToPrimitive
        + Ord
        + Clone
        + Hash
        + Debug
        + Display
        + 'static
{
}
