//! Variance-based uncertainty relations for `N ≥ 2` observables on
//! finite-dimensional pure states.
//!
//! The numerical core ([`qmath`], [`quantum`], [`bounds`], [`spinhalf`]) is
//! generic over [`Real`]; the aliases below fix it to `f64`, which is what
//! the simulation ([`expsim`]) and command-line ([`cli`]) layers use.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expsim;
pub mod qmath;
pub mod quantum;
pub mod scalar;
pub mod spinhalf;

pub use error::{Error, Result};
pub use scalar::Real;

pub use bounds::{BoundId, BoundKind};
pub use qmath::Seed;

pub type ComplexVector = qmath::ComplexVector<f64>;
pub type SquareMatrix = qmath::SquareMatrix<f64>;
pub type HermitianMatrix = qmath::HermitianMatrix<f64>;
pub type SpectralData = qmath::SpectralData<f64>;
pub type PureState = quantum::PureState<f64>;
pub type Observable = quantum::Observable<f64>;
pub type MeasurementStats = quantum::MeasurementStats<f64>;
pub type UVector = quantum::UVector<f64>;
pub type SignedProjectionVector = quantum::SignedProjectionVector<f64>;
pub type LambdaSet = bounds::LambdaSet<f64>;
pub type BoundInputs = bounds::BoundInputs<f64>;
pub type BoundReport = bounds::BoundReport<f64>;
pub type BlochAngles = spinhalf::BlochAngles<f64>;
pub type SpinExpectations = spinhalf::SpinExpectations<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type PureState = crate::quantum::PureState<f32>;
    pub type Observable = crate::quantum::Observable<f32>;
    pub type BoundReport = crate::bounds::BoundReport<f32>;
}
