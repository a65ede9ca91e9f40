//! Arithmetic of cubic surfaces at a prime.

// matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod brauer;
pub mod curve;
pub mod input;
pub mod lattice;
pub mod lines;
pub mod model;
