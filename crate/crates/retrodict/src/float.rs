//! Scalar abstraction: every numeric routine in this crate is generic over
//! the real field underlying its complex arithmetic.

use std::fmt;

use num_traits::{Float as NumFloat, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing all complex arithmetic.
///
/// Implemented for `f32` and `f64`. The tolerances documented in [`crate::tol`]
/// assume `f64`; `f32` compiles and runs but cannot meet the tighter residual
/// bounds.
pub trait Float:
    NumFloat
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Convert a literal constant or tolerance.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant must be representable")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Float for f32 {}
impl Float for f64 {}
