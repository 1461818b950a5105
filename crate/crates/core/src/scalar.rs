//! Scalar abstraction for the model math.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the model formulas are written against.
///
/// Implemented by `f32` and `f64`. Solver tolerances quoted throughout the
/// crate are calibrated for `f64`; with `f32` the iterative solvers stop at
/// whatever resolution the type supports.
pub trait Real: Float + FromPrimitive + Debug + Display {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display {}

/// Lossy conversion from an `f64` literal into the working scalar.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the working scalar")
}

/// Core counts enter the formulas as scalars.
pub(crate) fn real_u32<T: Real>(p: u32) -> T {
    T::from_u32(p).expect("core count must convert into the working scalar")
}
