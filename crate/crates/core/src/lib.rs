// `!(x > 0.0)` is the deliberate NaN-rejecting form for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::type_complexity)]

pub mod quad;
pub mod specfun;
pub mod contour;
pub mod relaxation;
pub mod process;
pub mod sampling;
pub mod verify;
mod par;
