//! Simulation library for the driven Tavis-Cummings model.
// Negated comparisons in this crate are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod dynamics;
pub mod error;
pub mod ground_state;
pub mod linalg;
pub mod measurement;
pub mod model;

pub use error::{Error, Result};
