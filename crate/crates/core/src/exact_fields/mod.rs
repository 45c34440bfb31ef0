//! Exact arithmetic in the ordered field of Puiseux series over the
//! rationals with `t` a positive infinitesimal, plus the matrix and
//! polynomial machinery the geometric layers are built on.

mod checks;
pub mod matrix;
pub mod newton;
mod parse;
pub mod puiseux;

pub use checks::field_axioms_check;
pub use matrix::{Matrix, PMatrix, QMatrix, Scalar};
pub use newton::{charpoly, charpoly_root_orders, finite_roots, newton_polygon, NewtonEdge};
pub use puiseux::{
    default_depth, rational_sqrt, set_default_depth, Exponent, Puiseux, Rational, DEFAULT_DEPTH,
};
