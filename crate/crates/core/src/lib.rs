//! Graded-algebra kernels for Getzler rescaling and the local index theorem.
//!
//! Exterior and Clifford algebra on a common blade basis, the spinor
//! representation and Berezin supertrace, analytic matrix functions over the
//! even-form ring, spin-bundle curvature formulas, Gaussian–Grassmann
//! integrals over `spin(n)`, the Mehler kernel and the Â-form, with
//! independent oracles for every checkable identity.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clifford;
pub mod convergence;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod getzler;
pub mod integrator;
mod math;
pub mod matrix;
pub mod nilpotent;
pub mod oracles;
pub mod sample;
pub mod spin_rep;

pub use error::{Error, Result};
