//! Scalar abstraction for the exact integer engines (matrices, Smith form,
//! q-series, divisors). Everything here is exact; there is no float path.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type: `i64`, `i128` or `BigInt`.
///
/// Fixed-width instantiations are convenient in tests; every higher-level
/// computation in this crate uses `BigInt`.
pub trait Scalar:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}
