//! One-dimensional model atoms in the lowest Landau level.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar for the common case.

// `!(a > b)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod binding;
pub mod eigensolve;
pub mod error;
pub mod landscape;
pub mod liebbound;
pub mod linalg;
pub mod model;
pub mod quasirandom;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PotentialKindF64 = specfun::PotentialKind<f64>;
pub type AccuracyBudgetF64 = specfun::AccuracyBudget<f64>;
pub type ModelParamsF64 = model::ModelParams<f64>;
pub type GridSpecF64 = model::GridSpec<f64>;
pub type DiscreteOperatorF64 = model::DiscreteOperator<f64>;
pub type SpectrumResultF64 = eigensolve::SpectrumResult<f64>;
pub type ConvergenceEstimateF64 = eigensolve::ConvergenceEstimate<f64>;
pub type BindingReportF64 = binding::BindingReport<f64>;
pub type CriticalChargeResultF64 = binding::CriticalChargeResult<f64>;
pub type RegimeReportF64 = landscape::RegimeReport<f64>;
pub type CriticalPointF64 = landscape::CriticalPoint<f64>;
pub type BoundReportF64 = liebbound::BoundReport<f64>;
