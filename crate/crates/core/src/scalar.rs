//! Floating-point abstraction shared by every real-valued quantity in the crate
//! (targets, normalizers, real clause weights, the SPL position).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// A real scalar usable for targets, weights and error metrics.
///
/// Implemented for `f32` and `f64`. Values cross file boundaries through
/// [`Scalar::parse`] and `Display`, which round-trip losslessly for both.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Parses a decimal literal. Returns `None` on malformed input.
    fn parse(s: &str) -> Option<Self>;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any float type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("integer converts to float")
    }
}

impl Scalar for f32 {
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Scalar for f64 {
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_display() {
        for v in [0.1f32, 700.0, 1.0e-7, 3.987] {
            assert_eq!(f32::parse(&v.to_string()), Some(v));
        }
        for v in [0.1f64, 700.0, 1.0e-300, 5.0 / 7.0] {
            assert_eq!(f64::parse(&v.to_string()), Some(v));
        }
        assert_eq!(f64::parse("x"), None);
    }
}
