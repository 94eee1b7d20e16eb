//! Numerical core for reparametrization-invariant mechanics and its quantum
//! counterparts on periodic one-dimensional grids.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. It is split
//! into four areas:
//!
//! * [`spectral`]: grids, sampled fields, a unitary radix-2 transform,
//!   Fourier multipliers such as `sqrt(mu^2 - Laplacian)`, inner products and
//!   the position/momentum uncertainty product.
//! * [`evolution`]: exact and split-step propagators for the nonrelativistic
//!   Schrödinger equation, the square-root relativistic equation and the real
//!   Klein-Gordon field, plus conserved quantities.
//! * [`equivalence`]: the maps between a real Klein-Gordon solution and a
//!   complex square-root wave function, and a combined residual report.
//! * [`mechanics`]: Legendre machinery for regular Lagrangians, the lifted
//!   constraint `p_t + H`, gauge lifts of trajectories, numeric Poisson
//!   brackets and relativistic momenta.
#![no_std]
// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod equivalence;
pub mod error;
pub mod evolution;
pub mod mechanics;
pub mod spectral;

mod diff;

pub use error::{Error, Result};
pub use num_complex::Complex64;
