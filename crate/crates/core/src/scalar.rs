//! Scalar abstraction shared by the linear-algebra and bound modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the numerical core is generic over.
///
/// Tolerances scale with the precision of the type: the `f64` values are the
/// documented contract, `f32` gets looser values of matching intent.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// General absolute tolerance: Hermiticity, normalization, variance clamping.
    fn tol() -> Self;
    /// Jacobi convergence threshold relative to the Frobenius norm.
    fn jacobi_tol() -> Self;
    /// Relative gap below which two eigenvalues count as degenerate.
    fn degeneracy_tol() -> Self;

    /// Converts an `f64` literal. Never fails for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }
}

impl Real for f64 {
    fn tol() -> Self {
        1e-12
    }
    fn jacobi_tol() -> Self {
        1e-13
    }
    fn degeneracy_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn tol() -> Self {
        1e-5
    }
    fn jacobi_tol() -> Self {
        1e-6
    }
    fn degeneracy_tol() -> Self {
        1e-4
    }
}
