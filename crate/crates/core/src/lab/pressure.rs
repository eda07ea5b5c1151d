use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::euler::{ConservedState, Dimension};
use crate::gas::GasParams;
use crate::grid::{fluctuation_linf, FrozenReference, PeriodicGrid, SpectralOperator, VectorField};

/// Linearized pressure `p_L` of an increment `δw = w − w_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedPressureField {
    pub values: Vec<f64>,
    pub mean: f64,
    /// `‖p_L − mean‖∞`.
    pub fluctuation: f64,
    /// Normalised Fourier coefficients `p̂_L(k)` in FFT order.
    pub coefficients: Vec<Complex64>,
}

impl LinearizedPressureField {
    /// `max_{k≠0} |p̂_L(k)|`.
    pub fn max_nonzero_mode(&self) -> f64 {
        self.coefficients[1..].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `(γ−1)(δE − ε²/2 Σ_s(−u_s² δρ + 2u_s δ(ρu_s)))` with `u` the reference
/// velocity. This is the pressure part of `f′(w_R)δw`: the momentum row of
/// the 1D Jacobian reads `−ū²δρ + 2ūδ(ρu) + p_L/ε²`.
pub(crate) fn linearized_pressure_at<D: Dimension>(delta: &D::Vector, reference: &D::Vector, gas: &GasParams) -> f64 {
    let d = delta.as_ref();
    let r = reference.as_ref();
    let m = D::VARS;
    let kinetic: f64 = (0..D::DIM)
        .map(|s| {
            let u = r[1 + s] / r[0];
            -u * u * d[0] + 2.0 * u * d[1 + s]
        })
        .sum();
    (gas.gamma() - 1.0) * (d[m - 1] - 0.5 * gas.eps2() * kinetic)
}

/// Pointwise `p_L` of `δw` about a (possibly per-cell) reference.
pub fn linearized_pressure_values<D: Dimension>(
    delta: &VectorField<D>,
    reference: &FrozenReference<D>,
    gas: &GasParams,
) -> Vec<f64> {
    delta
        .data()
        .iter()
        .enumerate()
        .map(|(j, d)| linearized_pressure_at::<D>(d, reference.at(j), gas))
        .collect()
}

/// Linearized pressure of a 1D increment about a constant reference state,
/// with its Fourier coefficients.
pub fn linearized_pressure<D: Dimension>(
    delta: &VectorField<D>,
    reference: &ConservedState<D>,
    gas: &GasParams,
) -> Result<LinearizedPressureField> {
    if D::DIM != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: D::DIM,
        });
    }
    let values = linearized_pressure_values(delta, &FrozenReference::uniform(reference), gas);
    let coefficients = SpectralOperator::new(delta.grid()).forward(&values);
    let mean = coefficients[0].re;
    Ok(LinearizedPressureField {
        fluctuation: fluctuation_linf(&values),
        values,
        mean,
        coefficients,
    })
}

/// How `∂ₓ` is represented in the θ symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSymbol {
    /// `ik`.
    Spectral,
    /// `i sin(kΔx)/Δx`, the symbol of the central difference.
    CentralDifference { dx: f64 },
}

/// `θ = (Id + Δt ū ∂ₓ)² = Id + 2Δt ū ∂ₓ + Δt² ū² ∂ₓₓ` on periodic 1D fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOperator {
    pub velocity: f64,
    pub dt: f64,
    pub symbol: ThetaSymbol,
}

impl ThetaOperator {
    pub fn spectral(velocity: f64, dt: f64) -> Self {
        Self {
            velocity,
            dt,
            symbol: ThetaSymbol::Spectral,
        }
    }

    pub fn central(velocity: f64, dt: f64, grid: &PeriodicGrid) -> Self {
        Self {
            velocity,
            dt,
            symbol: ThetaSymbol::CentralDifference { dx: grid.dx() },
        }
    }

    /// Symbol of `∂ₓ` at wavenumber `k` divided by `i`.
    pub fn derivative_symbol(&self, k: f64) -> f64 {
        match self.symbol {
            ThetaSymbol::Spectral => k,
            ThetaSymbol::CentralDifference { dx } => (k * dx).sin() / dx,
        }
    }

    /// `(1 + iΔt ū k)²` with `k` replaced by the derivative symbol.
    pub fn symbol_at(&self, k: f64) -> Complex64 {
        let z = Complex64::new(1.0, self.dt * self.velocity * self.derivative_symbol(k));
        z * z
    }

    /// `θ m` or `θ⁻¹ m` for a periodic 1D field.
    pub fn apply(&self, values: &[f64], grid: &PeriodicGrid, inverse: bool) -> Vec<f64> {
        SpectralOperator::new(grid).apply_symbol(values, |_, k| {
            let s = self.symbol_at(k[0]);
            if inverse {
                s.inv()
            } else {
                s
            }
        })
    }
}
