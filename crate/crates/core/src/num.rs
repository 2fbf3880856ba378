//! Scalar abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type usable by the solver, the diffusion stencil and the
/// mesh/color code.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Primal feasibility tolerance used by the simplex solver.
    fn feasibility_tol() -> Self;
    /// Reduced-cost tolerance used by the simplex solver.
    fn optimality_tol() -> Self;
    /// Smallest pivot magnitude accepted in the ratio test.
    fn pivot_tol() -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    fn feasibility_tol() -> Self {
        1e-9
    }
    fn optimality_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-11
    }
}

impl Scalar for f32 {
    fn feasibility_tol() -> Self {
        1e-4
    }
    fn optimality_tol() -> Self {
        1e-4
    }
    fn pivot_tol() -> Self {
        1e-6
    }
}
