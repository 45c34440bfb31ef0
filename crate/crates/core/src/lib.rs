//! Affine Λ-buildings `SL_n(R)/SL_n(O)` over a computable nonarchimedean
//! ordered field.
//!
//! The field `R` is the field of Puiseux series over ℚ in a positive
//! infinitesimal `t`; `O` is its convex valuation ring of series with
//! nonnegative order. Everything is exact: coefficients are rationals and
//! truncated series carry certified windows.

pub mod building;
pub mod cone;
pub mod error;
pub mod exact_fields;
pub mod log_value;
pub mod report;
pub mod sampling;
pub mod symmetric_space;
pub mod valuation;

pub use error::{Error, Result};
