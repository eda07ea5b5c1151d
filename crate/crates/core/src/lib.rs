//! Linearly implicit reference-state schemes for the weakly compressible
//! Euler equations on periodic grids.
//!
//! The crate is organised bottom-up:
//!
//! * [`euler`]: equation of state, fluxes, analytic Jacobians and their
//!   ε-expansions, and the stiff/non-stiff flux splitting about a reference
//!   state, for 1D (3 unknowns) and 2D (4 unknowns).
//! * [`grid`]: periodic grids, fields, FFT-based spectral operators, the
//!   Rusanov flux for the explicit part, the central implicit stencil and
//!   CSV field I/O.
//! * [`integrator`]: one linearly implicit step with a pluggable reference
//!   strategy, an exact per-wavenumber solver for constant references and a
//!   preconditioned GMRES solver otherwise.
//! * [`lab`]: asymptotic diagnostics such as well-prepared data, the
//!   linearized pressure and its θ operator, the ω coefficients, ε-sweeps
//!   and the flux-linearization consistency probe.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod euler;
pub mod gas;
pub mod grid;
pub mod integrator;
pub mod lab;

pub use error::{Error, Result};
pub use euler::{Axis, ConservedState, Dimension, OneD, TwoD};
pub use gas::GasParams;
pub use grid::{ConservedField, PeriodicGrid, VectorField};
