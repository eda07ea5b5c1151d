use crate::error::{Error, Result};
use crate::euler::{Axis, Dimension};
use crate::gas::GasParams;
use crate::grid::{ConservedField, PeriodicGrid, SpectralOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}

impl Trig {
    fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
        }
    }
}

/// One term `a · tx(kx·x) · ty(ky·y)` of a stream function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamTerm {
    pub amplitude: f64,
    pub x: Trig,
    pub kx: i64,
    pub y: Trig,
    pub ky: i64,
}

impl StreamTerm {
    pub fn new(amplitude: f64, x: Trig, kx: i64, y: Trig, ky: i64) -> Self {
        Self {
            amplitude,
            x,
            kx,
            y,
            ky,
        }
    }
}

/// Parameters of a well-prepared initial state: constant density,
/// pressure `p̄ + ε²p₂` and a velocity free of O(1) compressions.
///
/// In 2D the velocity is `ū + (∂_y ψ, −∂_x ψ)` and `p₂` solves the
/// incompressible pressure equation. In 1D the velocity is
/// `ū + ε²a_u sin(kx)` and `p₂ = a₂ cos(kx)`; an optional O(1) density
/// wave `ρ̄ + a_ρ sin(kx)` (1D only) adds an entropy mode that is advected
/// without acoustic content.
#[derive(Debug, Clone, PartialEq)]
pub struct WellPreparedSpec {
    pub rho_mean: f64,
    pub p_mean: f64,
    pub velocity_mean: [f64; 2],
    pub stream: Vec<StreamTerm>,
    pub velocity_amplitude: f64,
    pub pressure_amplitude: f64,
    pub density_amplitude: f64,
    pub wavenumber: i64,
}

impl Default for WellPreparedSpec {
    /// An unsteady vortex array `ψ = sin x sin y + ½ cos 2x cos 2y`. Every
    /// term has `|kx| = |ky|`, so the velocity is divergence-free for the
    /// central difference too, not only spectrally.
    fn default() -> Self {
        Self {
            rho_mean: 1.0,
            p_mean: 1.0,
            velocity_mean: [0.0, 0.0],
            stream: vec![
                StreamTerm::new(1.0, Trig::Sin, 1, Trig::Sin, 1),
                StreamTerm::new(0.5, Trig::Cos, 2, Trig::Cos, 2),
            ],
            velocity_amplitude: 0.5,
            pressure_amplitude: 1.0,
            density_amplitude: 0.0,
            wavenumber: 1,
        }
    }
}

impl WellPreparedSpec {
    /// 1D data around mean velocity `u`.
    pub fn one_d(rho_mean: f64, p_mean: f64, velocity: f64) -> Self {
        Self {
            rho_mean,
            p_mean,
            velocity_mean: [velocity, 0.0],
            ..Self::default()
        }
    }

    /// Shear flow `ψ = cos y`, a steady solution of the incompressible and
    /// compressible equations alike.
    pub fn shear() -> Self {
        Self {
            stream: vec![StreamTerm::new(1.0, Trig::Cos, 0, Trig::Cos, 1)],
            ..Self::default()
        }
    }

    fn validate(&self, grid: &PeriodicGrid) -> Result<()> {
        if !(self.rho_mean > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho_mean",
                value: self.rho_mean,
                reason: "must be positive",
            });
        }
        if !(self.density_amplitude.abs() < self.rho_mean) {
            return Err(Error::InvalidParameter {
                name: "density_amplitude",
                value: self.density_amplitude,
                reason: "must be smaller than rho_mean in magnitude",
            });
        }
        if grid.dim() == 2 && self.density_amplitude != 0.0 {
            return Err(Error::InvalidParameter {
                name: "density_amplitude",
                value: self.density_amplitude,
                reason: "density waves are only supported in 1D",
            });
        }
        if !(self.p_mean > 0.0) {
            return Err(Error::InvalidParameter {
                name: "p_mean",
                value: self.p_mean,
                reason: "must be positive",
            });
        }
        let n = grid.cells_per_axis();
        let resolved = |k: i64| 2 * k.unsigned_abs() < n as u64;
        let modes: Vec<i64> = if grid.dim() == 1 {
            vec![self.wavenumber]
        } else {
            self.stream.iter().flat_map(|t| [t.kx, t.ky]).collect()
        };
        // products in the pressure equation double the wavenumbers
        let factor = if grid.dim() == 1 { 1 } else { 2 };
        match modes.into_iter().find(|&k| !resolved(factor * k)) {
            Some(mode) => Err(Error::UnresolvedMode { mode, cells: n }),
            None => Ok(()),
        }
    }

    /// Stream function sampled on a 2D grid.
    pub fn stream_function(&self, grid: &PeriodicGrid) -> Vec<f64> {
        (0..grid.num_cells())
            .map(|j| {
                let [x, y] = grid.point(j);
                self.stream
                    .iter()
                    .map(|t| t.amplitude * t.x.eval(t.kx as f64 * x) * t.y.eval(t.ky as f64 * y))
                    .sum()
            })
            .collect()
    }
}

/// Builds the well-prepared field of `spec` at the ε of `gas`.
pub fn make_well_prepared<D: Dimension>(
    spec: &WellPreparedSpec,
    grid: &PeriodicGrid,
    gas: &GasParams,
) -> Result<ConservedField<D>> {
    if grid.dim() != D::DIM {
        return Err(Error::DimensionMismatch {
            expected: D::DIM,
            found: grid.dim(),
        });
    }
    spec.validate(grid)?;
    let n = grid.num_cells();
    let e2 = gas.epsilon() * gas.epsilon();
    let rho: Vec<f64> = if D::DIM == 1 {
        let k = spec.wavenumber as f64;
        (0..n)
            .map(|j| spec.rho_mean + spec.density_amplitude * (k * grid.coordinate(j)).sin())
            .collect()
    } else {
        vec![spec.rho_mean; n]
    };
    let (velocity, p2) = if D::DIM == 1 {
        let k = spec.wavenumber as f64;
        let u = (0..n)
            .map(|j| spec.velocity_mean[0] + e2 * spec.velocity_amplitude * (k * grid.coordinate(j)).sin())
            .collect();
        let p2 = (0..n)
            .map(|j| spec.pressure_amplitude * (k * grid.coordinate(j)).cos())
            .collect();
        (vec![u], p2)
    } else {
        let (u, v, p2) = incompressible_fields(spec, grid);
        let u = u.iter().map(|x| x + spec.velocity_mean[0]).collect();
        let v = v.iter().map(|x| x + spec.velocity_mean[1]).collect();
        (vec![u, v], p2)
    };
    let pressure: Vec<f64> = p2.iter().map(|q: &f64| spec.p_mean + e2 * q).collect();
    ConservedField::from_primitive(*grid, *gas, &rho, &velocity, &pressure)
}

/// Velocity fluctuation `(∂_y ψ, −∂_x ψ)` and the zero-mean incompressible
/// pressure `p₂` with `Δp₂ = −ρ̄ ∇·(u·∇u)`, all spectral.
pub fn incompressible_fields(spec: &WellPreparedSpec, grid: &PeriodicGrid) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let op = SpectralOperator::new(grid);
    let psi = spec.stream_function(grid);
    let u = op.derivative(&psi, Axis::Y);
    let v: Vec<f64> = op.derivative(&psi, Axis::X).iter().map(|x| -x).collect();
    let ubar = spec.velocity_mean;
    let full = [
        u.iter().map(|x| x + ubar[0]).collect::<Vec<_>>(),
        v.iter().map(|x| x + ubar[1]).collect::<Vec<_>>(),
    ];
    let grads = [op.gradient(&full[0]), op.gradient(&full[1])];
    // (u·∇u)_c = Σ_s u_s ∂_s u_c
    let adv: Vec<Vec<f64>> = (0..2)
        .map(|c| {
            (0..grid.num_cells())
                .map(|j| full[0][j] * grads[c][0][j] + full[1][j] * grads[c][1][j])
                .collect()
        })
        .collect();
    let div = op.divergence(&[&adv[0], &adv[1]]);
    let rhs: Vec<f64> = div.iter().map(|d| -spec.rho_mean * d).collect();
    let p2 = op.poisson(&rhs);
    (u, v, p2)
}
