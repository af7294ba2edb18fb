#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod alexander;
pub mod braid;
pub mod curve;
pub mod error;
pub mod group;
pub mod monodromy;
pub mod numeric;
pub mod parallel;
pub mod pipeline;

pub use error::{Error, Result};
