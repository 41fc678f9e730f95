//! Integer time coordinates.
//!
//! Every time value in this crate (switch instants, delays, memories,
//! inertial parameters) is a whole number of ticks. The scalar is generic so
//! callers can pick the width they need; all arithmetic on it is checked.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{CheckedAdd, CheckedSub, FromPrimitive, PrimInt, Signed, ToPrimitive};

/// A signed primitive integer usable as a tick coordinate.
pub trait TickInt:
    PrimInt
    + Signed
    + CheckedAdd
    + CheckedSub
    + FromPrimitive
    + ToPrimitive
    + Hash
    + Debug
    + Display
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> TickInt for T where
    T: PrimInt
        + Signed
        + CheckedAdd
        + CheckedSub
        + FromPrimitive
        + ToPrimitive
        + Hash
        + Debug
        + Display
        + FromStr
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Raised when a tick computation leaves the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("tick arithmetic overflow")]
pub struct TickOverflow;

#[inline]
pub(crate) fn add<T: TickInt>(a: T, b: T) -> Result<T, TickOverflow> {
    a.checked_add(&b).ok_or(TickOverflow)
}

#[inline]
pub(crate) fn sub<T: TickInt>(a: T, b: T) -> Result<T, TickOverflow> {
    a.checked_sub(&b).ok_or(TickOverflow)
}

#[inline]
pub(crate) fn from_i64<T: TickInt>(v: i64) -> Result<T, TickOverflow> {
    T::from_i64(v).ok_or(TickOverflow)
}

#[inline]
pub(crate) fn to_i64<T: TickInt>(v: T) -> Result<i64, TickOverflow> {
    v.to_i64().ok_or(TickOverflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_ops_report_overflow() {
        assert_eq!(add(i32::MAX, 1), Err(TickOverflow));
        assert_eq!(sub(i32::MIN, 1), Err(TickOverflow));
        assert_eq!(add(3i64, -5), Ok(-2));
        assert_eq!(from_i64::<i32>(i64::MAX), Err(TickOverflow));
    }
}
