//! Scalar types usable as finite max-plus weights.
//!
//! Every decision procedure in this crate compares weights for exact
//! equality (victorious coordinates, zero-weight cycles, configuration
//! dedup), so the scalar must be totally ordered. Floating point types do
//! not implement [`Ord`] and are rejected by the bound on purpose; use
//! [`num::BigRational`] (the crate default, see [`crate::Rational`]),
//! [`num::rational::Rational64`] or a primitive signed integer.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num::{FromPrimitive, Num, Signed};

/// A totally ordered, exact, signed number.
pub trait Scalar: Num + Signed + FromPrimitive + Ord + Clone + Hash + Debug + Display + Send + Sync + 'static {
    /// Converts a small integer literal; used by fixtures and builders.
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent a small integer")
    }
}

impl<T> Scalar for T where T: Num + Signed + FromPrimitive + Ord + Clone + Hash + Debug + Display + Send + Sync + 'static
{}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Rational64;
    use num::BigRational;

    fn roundtrip<S: Scalar>() -> S {
        S::int(-3) + S::int(5)
    }

    #[test]
    fn common_scalars_qualify() {
        assert_eq!(roundtrip::<i64>(), 2);
        assert_eq!(roundtrip::<Rational64>(), Rational64::from_integer(2));
        assert_eq!(roundtrip::<BigRational>(), BigRational::from_integer(2.into()));
    }
}
