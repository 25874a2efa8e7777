//! Accumulator scalar for path counting.

use std::ops::AddAssign;

use num_traits::{One, Zero};

/// Anything the counting engines can tally into: zero, one, cloning, and
/// in-place addition (by reference, so big integers are never copied just to
/// be added). `u64`/`u128` work for small instances; [`crate::PathCount`] is
/// the exact choice for anything competition-sized.
pub trait Count: Zero + One + Clone + Send + for<'a> AddAssign<&'a Self> {}

impl<T> Count for T where T: Zero + One + Clone + Send + for<'a> AddAssign<&'a T> {}
