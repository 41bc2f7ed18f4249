//! k-Gamma and k-Beta functions, generalized k-Wright series, and the
//! Katugampola fractional operators applied to them.
//!
//! The closed-form images of power and exponential functions live in
//! [`closed_forms`], the symbolic k-Wright rewrites in [`transforms`], and an
//! independent quadrature/finite-difference evaluation of the operators in
//! [`operator_oracle`]. [`verify`] compares the two on parameter grids.

pub mod closed_forms;
pub mod config;
pub mod error;
pub mod kwright;
pub mod operator_oracle;
pub mod scalar;
pub mod special_fn;
pub mod sum;
pub mod transforms;
pub mod verify;

pub use closed_forms::{OperatorKind, OperatorSpec, PowerImage};
pub use config::QuadratureConfig;
pub use error::{Error, Result};
pub use kwright::{ConvergenceClass, ConvergenceReport, KWrightSpec, SeriesValue};
pub use operator_oracle::Estimate;
pub use transforms::{evaluate_transform, PowerWrightArg, TransformResult};
