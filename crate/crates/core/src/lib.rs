//! Small-register quantum simulation with a focus on what can and cannot be
//! reproduced classically.
//!
//! * [`statevector`]: dense reference engine for arbitrary gates.
//! * [`stabilizer`]: tableau engine for Clifford circuits.
//! * [`chsh`]: CHSH correlations, S-factor, angle scans and maximization.
//! * [`lhv`]: local hidden variable models and the classical bound.
//! * [`protocols`]: teleportation, superdense coding and BB84.
//! * [`circuit`]: a small circuit language with a Clifford classifier.
//!
//! The numeric modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the usual double-precision instantiations.

pub mod chsh;
pub mod circuit;
pub mod error;
pub mod lhv;
pub mod linalg;
pub mod protocols;
pub mod rng;
pub mod scalar;
pub mod stabilizer;
pub mod statevector;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type StateVector64 = statevector::StateVector<f64>;
pub type StateVector32 = statevector::StateVector<f32>;
pub type GateOp64 = statevector::GateOp<f64>;
pub type DensityMatrix64 = statevector::DensityMatrix2x2<f64>;
pub type Matrix2x64 = linalg::Matrix2<f64>;
pub type Observable64 = chsh::Observable2x2<f64>;
pub type MeasurementSettings64 = chsh::MeasurementSettings<f64>;
pub type SFactorResult64 = chsh::SFactorResult<f64>;
pub type CorrelationGrid64 = chsh::CorrelationGrid<f64>;
pub type LhvModel64 = lhv::LhvModel<f64>;
pub type LhvModel32 = lhv::LhvModel<f32>;
