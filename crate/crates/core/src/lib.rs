//! Greedy Riesz s-energy sequences on the unit circle.
//!
//! The greedy energy of N points depends only on the binary digits of N,
//! so energies, the scaled sequences T_{N,s} and F_{N,s}, and their
//! leading-order predictions are computed exactly in O(τ_b(N)²) work. The
//! limit-point functions on [1/2, 1] and grid scans for their extremal
//! constants live in [`limits`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod asymptotics;
pub mod binary;
pub mod cli;
pub mod energy;
mod error;
pub mod limits;
pub mod special;
pub mod sum;

pub use binary::{
    decompose, eta, expand_reciprocal, grid_points, tau_b, BinaryDecomposition, Rational, SVector,
    Tail, ThetaVector,
};
pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
