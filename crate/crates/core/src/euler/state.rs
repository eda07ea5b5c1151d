use std::fmt;

use super::{Dimension, STATE_FLOOR};
use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Conserved variables `(ρ, ρu[, ρv], E)` of one cell.
///
/// Construction validates `ρ > 1e-12` and `p > 1e-12`; the stored vector is
/// never clamped.
pub struct ConservedState<D: Dimension> {
    w: D::Vector,
}

impl<D: Dimension> Clone for ConservedState<D> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<D: Dimension> Copy for ConservedState<D> {}

impl<D: Dimension> PartialEq for ConservedState<D> {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w
    }
}

impl<D: Dimension> fmt::Debug for ConservedState<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ConservedState").field(&self.w.as_ref()).finish()
    }
}

impl<D: Dimension> ConservedState<D> {
    pub fn new(rho: f64, momentum: &[f64], energy: f64, gas: &GasParams) -> Result<Self> {
        if momentum.len() != D::DIM {
            return Err(Error::DimensionMismatch {
                expected: D::DIM,
                found: momentum.len(),
            });
        }
        let mut w = D::Vector::default();
        let ws = w.as_mut();
        ws[0] = rho;
        ws[1..=D::DIM].copy_from_slice(momentum);
        ws[D::DIM + 1] = energy;
        Self::from_vector(w, gas)
    }

    /// Builds a state from density, velocity and pressure.
    pub fn from_primitive(rho: f64, velocity: &[f64], pressure: f64, gas: &GasParams) -> Result<Self> {
        if velocity.len() != D::DIM {
            return Err(Error::DimensionMismatch {
                expected: D::DIM,
                found: velocity.len(),
            });
        }
        let momentum: Vec<f64> = velocity.iter().map(|u| rho * u).collect();
        let energy = energy_from_pressure(rho, velocity, pressure, gas);
        Self::new(rho, &momentum, energy, gas)
    }

    pub fn from_vector(w: D::Vector, gas: &GasParams) -> Result<Self> {
        let ws = w.as_ref();
        if ws.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite component in {ws:?}")));
        }
        let rho = ws[0];
        if rho <= STATE_FLOOR {
            return Err(Error::InvalidState(format!("density {rho:e} ≤ {STATE_FLOOR:e}")));
        }
        let p = raw_pressure::<D>(&w, gas);
        if p <= STATE_FLOOR {
            return Err(Error::InvalidState(format!("pressure {p:e} ≤ {STATE_FLOOR:e}")));
        }
        Ok(Self { w })
    }

    pub fn as_vector(&self) -> &D::Vector {
        &self.w
    }

    pub fn components(&self) -> &[f64] {
        self.w.as_ref()
    }

    pub fn rho(&self) -> f64 {
        self.w.as_ref()[0]
    }

    pub fn momentum(&self, axis: usize) -> f64 {
        self.w.as_ref()[1 + axis]
    }

    pub fn velocity(&self, axis: usize) -> f64 {
        self.momentum(axis) / self.rho()
    }

    pub fn energy(&self) -> f64 {
        self.w.as_ref()[D::DIM + 1]
    }

    /// Pressure from the equation of state; always positive for a constructed state.
    pub fn pressure(&self, gas: &GasParams) -> f64 {
        raw_pressure::<D>(&self.w, gas)
    }
}

pub(crate) fn raw_pressure<D: Dimension>(w: &D::Vector, gas: &GasParams) -> f64 {
    let ws = w.as_ref();
    let rho = ws[0];
    let m2: f64 = ws[1..=D::DIM].iter().map(|m| m * m).sum();
    (gas.gamma() - 1.0) * (ws[D::DIM + 1] - 0.5 * gas.eps2() * m2 / rho)
}

/// `p = (γ−1)(E − ε²ρ|u|²/2)`, rejecting non-positive results.
pub fn pressure_from_state<D: Dimension>(w: &ConservedState<D>, gas: &GasParams) -> Result<f64> {
    let p = raw_pressure::<D>(w.as_vector(), gas);
    if p <= STATE_FLOOR {
        return Err(Error::InvalidState(format!("pressure {p:e} ≤ {STATE_FLOOR:e}")));
    }
    Ok(p)
}

/// Inverse of [`pressure_from_state`]: `E = p/(γ−1) + ε²ρ|u|²/2`.
pub fn energy_from_pressure(rho: f64, velocity: &[f64], pressure: f64, gas: &GasParams) -> f64 {
    let u2: f64 = velocity.iter().map(|u| u * u).sum();
    pressure / (gas.gamma() - 1.0) + 0.5 * gas.eps2() * rho * u2
}
