//! Physics layer of the weakly compressible Euler system.
//!
//! Conserved variables are `w = (ρ, ρu[, ρv], E)` with the dimensionless
//! equation of state `E = p/(γ−1) + ε²ρ|u|²/2`. The momentum flux carries the
//! pressure as `p/ε²`, which is where the stiffness of the low Mach regime
//! enters.
//!
//! The 1D and 2D systems are independent code paths ([`OneD`] and
//! [`TwoD`]); generic code is written against the [`Dimension`] trait.

mod expansion;
mod one_d;
pub(crate) mod splitting;
pub(crate) mod state;
mod two_d;

pub use expansion::{jacobian_eps_expansion, JacobianEpsExpansion};
pub use one_d::OneD;
pub use splitting::{nonstiff_flux, stiff_flux};
pub use state::{energy_from_pressure, pressure_from_state, ConservedState};
pub use two_d::TwoD;

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Smallest admissible density and pressure.
pub const STATE_FLOOR: f64 = 1e-12;

/// Coordinate direction `s` of a flux `f_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const ALL: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    /// Axes that exist in `dim` space dimensions.
    pub fn up_to(dim: usize) -> &'static [Axis] {
        &Self::ALL[..dim]
    }

    pub(crate) fn check<D: Dimension>(self) -> Result<()> {
        if self.index() < D::DIM {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: D::DIM,
                found: self.index() + 1,
            })
        }
    }
}

mod sealed {
    pub trait Sealed {}
    impl Sealed for super::OneD {}
    impl Sealed for super::TwoD {}
}

/// Space dimension of the Euler system.
///
/// Vectors hold the `VARS = DIM + 2` conserved components; matrices are
/// `VARS × VARS`, stored row-major. The flux routines assume a valid state
/// (positive density and pressure); validation happens in [`ConservedState`].
pub trait Dimension: sealed::Sealed + Copy + Debug + Send + Sync + 'static {
    const DIM: usize;
    const VARS: usize;

    type Vector: Copy + Default + Debug + PartialEq + Send + Sync + AsRef<[f64]> + AsMut<[f64]> + 'static;
    type Matrix: Copy + Default + Debug + PartialEq + Send + Sync + AsRef<[f64]> + AsMut<[f64]> + 'static;

    fn flux(w: &Self::Vector, gas: &GasParams, axis: Axis) -> Self::Vector;

    fn jacobian(w: &Self::Vector, gas: &GasParams, axis: Axis) -> Self::Matrix;

    /// ε⁻² and ε⁰ coefficients of the Jacobian for a leading-order state.
    fn jacobian_orders(w0: &Self::Vector, gas: &GasParams, axis: Axis) -> (Self::Matrix, Self::Matrix);

    /// Largest eigenvalue modulus of a real `VARS × VARS` matrix.
    fn spectral_radius(m: &Self::Matrix) -> f64;

    fn flatten(v: &[Self::Vector]) -> &[f64];

    fn flatten_mut(v: &mut [Self::Vector]) -> &mut [f64];
}

/// `y = A x` for a row-major matrix of the given dimension.
pub(crate) fn mat_vec<D: Dimension>(a: &D::Matrix, x: &D::Vector) -> D::Vector {
    let m = D::VARS;
    let a = a.as_ref();
    let xs = x.as_ref();
    let mut y = D::Vector::default();
    for (r, out) in y.as_mut().iter_mut().enumerate() {
        *out = (0..m).map(|c| a[r * m + c] * xs[c]).sum();
    }
    y
}

pub(crate) fn vec_sub<D: Dimension>(a: &D::Vector, b: &D::Vector) -> D::Vector {
    let mut out = *a;
    for (o, bi) in out.as_mut().iter_mut().zip(b.as_ref()) {
        *o -= bi;
    }
    out
}

pub(crate) fn vec_add<D: Dimension>(a: &D::Vector, b: &D::Vector) -> D::Vector {
    let mut out = *a;
    for (o, bi) in out.as_mut().iter_mut().zip(b.as_ref()) {
        *o += bi;
    }
    out
}

pub(crate) fn mat_sub<D: Dimension>(a: &D::Matrix, b: &D::Matrix) -> D::Matrix {
    let mut out = *a;
    for (o, bi) in out.as_mut().iter_mut().zip(b.as_ref()) {
        *o -= bi;
    }
    out
}

/// Analytic flux Jacobian `∂f_s/∂w` at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxJacobian<D: Dimension> {
    entries: D::Matrix,
    axis: Axis,
}

impl<D: Dimension> FluxJacobian<D> {
    pub(crate) fn from_matrix(entries: D::Matrix, axis: Axis) -> Self {
        Self { entries, axis }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn matrix(&self) -> &D::Matrix {
        &self.entries
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries.as_ref()[row * D::VARS + col]
    }

    pub fn apply(&self, x: &D::Vector) -> D::Vector {
        mat_vec::<D>(&self.entries, x)
    }

    pub fn spectral_radius(&self) -> f64 {
        D::spectral_radius(&self.entries)
    }
}

/// Flux `f_s(w)`.
pub fn flux<D: Dimension>(w: &ConservedState<D>, gas: &GasParams, axis: Axis) -> Result<D::Vector> {
    axis.check::<D>()?;
    Ok(D::flux(w.as_vector(), gas, axis))
}

/// Analytic Jacobian of [`flux`].
pub fn flux_jacobian<D: Dimension>(w: &ConservedState<D>, gas: &GasParams, axis: Axis) -> Result<FluxJacobian<D>> {
    axis.check::<D>()?;
    Ok(FluxJacobian::from_matrix(D::jacobian(w.as_vector(), gas, axis), axis))
}
