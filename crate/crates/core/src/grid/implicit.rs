use num_complex::Complex64;
use rayon::prelude::*;

use super::{FrozenReference, PeriodicGrid, VectorField};
use crate::error::{Error, Result};
use crate::euler::{mat_vec, Axis, Dimension};
use crate::gas::GasParams;

/// Default coefficient of the fourth-difference stabilization.
pub const DEFAULT_THETA4: f64 = 0.01;

/// Central divergence `Σ_s (g_s(j+1) − g_s(j−1)) / 2Δx` of per-cell fluxes.
pub fn central_divergence<D, F>(grid: &PeriodicGrid, flux: F) -> VectorField<D>
where
    D: Dimension,
    F: Fn(usize, Axis) -> D::Vector + Sync,
{
    let n = grid.num_cells();
    let inv = 0.5 / grid.dx();
    let mut out = VectorField::<D>::zeros(*grid);
    for &axis in grid.axes() {
        let g: Vec<D::Vector> = (0..n).into_par_iter().map(|j| flux(j, axis)).collect();
        out.data_mut().par_iter_mut().enumerate().for_each(|(j, o)| {
            let r = g[grid.neighbor(j, axis, 1)];
            let l = g[grid.neighbor(j, axis, -1)];
            for ((x, ri), li) in o.as_mut().iter_mut().zip(r.as_ref()).zip(l.as_ref()) {
                *x += (ri - li) * inv;
            }
        });
    }
    out
}

#[derive(Debug, Clone)]
enum Jacobians<D: Dimension> {
    Uniform(Vec<D::Matrix>),
    PerCell(Vec<Vec<D::Matrix>>),
}

/// Implicit spatial operator `D_imp δ`: central differences of the frozen
/// Jacobians `f′_s(w_R) δ` plus a fourth-difference term
/// `θ₄/Δx · (δ_{j+2} − 4δ_{j+1} + 6δ_j − 4δ_{j−1} + δ_{j−2})` per axis.
///
/// The stabilization keeps the central operator from decoupling odd and even
/// points; it vanishes on smooth fields at rate `Δx³`.
#[derive(Debug, Clone)]
pub struct ImplicitDivergence<D: Dimension> {
    grid: PeriodicGrid,
    gas: GasParams,
    jacobians: Jacobians<D>,
    theta4: f64,
}

impl<D: Dimension> ImplicitDivergence<D> {
    pub fn new(grid: &PeriodicGrid, gas: &GasParams, reference: &FrozenReference<D>, theta4: f64) -> Result<Self> {
        if grid.dim() != D::DIM {
            return Err(Error::DimensionMismatch {
                expected: D::DIM,
                found: grid.dim(),
            });
        }
        if !(theta4 >= 0.0 && theta4.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta4",
                value: theta4,
                reason: "must be finite and non-negative",
            });
        }
        reference.check_len(grid.num_cells())?;
        let jacobians = match reference {
            FrozenReference::Uniform(r) => {
                Jacobians::Uniform(grid.axes().iter().map(|&a| D::jacobian(r, gas, a)).collect())
            }
            FrozenReference::PerCell(cells) => Jacobians::PerCell(
                grid.axes()
                    .iter()
                    .map(|&a| cells.par_iter().map(|r| D::jacobian(r, gas, a)).collect())
                    .collect(),
            ),
        };
        Ok(Self {
            grid: *grid,
            gas: *gas,
            jacobians,
            theta4,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Same operator frozen about another reference.
    pub fn with_reference(&self, reference: &FrozenReference<D>) -> Result<Self> {
        Self::new(&self.grid, &self.gas, reference, self.theta4)
    }

    pub fn theta4(&self) -> f64 {
        self.theta4
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.jacobians, Jacobians::Uniform(_))
    }

    /// Frozen Jacobian `f′_s(w_R)` at cell `j`.
    pub fn jacobian(&self, j: usize, axis: Axis) -> &D::Matrix {
        match &self.jacobians {
            Jacobians::Uniform(m) => &m[axis.index()],
            Jacobians::PerCell(m) => &m[axis.index()][j],
        }
    }

    /// `D_imp δ` including stabilization.
    pub fn apply(&self, delta: &VectorField<D>) -> VectorField<D> {
        let mut out = self.apply_central(delta);
        self.add_stabilization(delta, 1.0, &mut out);
        out
    }

    /// Central part `Σ_s (A_s δ)_{j+1} − (A_s δ)_{j−1}) / 2Δx` only.
    pub fn apply_central(&self, delta: &VectorField<D>) -> VectorField<D> {
        let d = delta.data();
        central_divergence::<D, _>(&self.grid, |j, axis| mat_vec::<D>(self.jacobian(j, axis), &d[j]))
    }

    /// Stabilization term applied to `v`.
    pub fn stabilization(&self, v: &VectorField<D>) -> VectorField<D> {
        let mut out = VectorField::zeros(self.grid);
        self.add_stabilization(v, 1.0, &mut out);
        out
    }

    /// `out += scale · S v` with `S` the fourth-difference operator.
    pub(crate) fn add_stabilization(&self, v: &VectorField<D>, scale: f64, out: &mut VectorField<D>) {
        if self.theta4 == 0.0 {
            return;
        }
        let c = scale * self.theta4 / self.grid.dx();
        let g = self.grid;
        let d = v.data();
        for &axis in g.axes() {
            out.data_mut().par_iter_mut().enumerate().for_each(|(j, o)| {
                let at = |k: isize| d[g.neighbor(j, axis, k)].as_ref();
                let (m2, m1, z, p1, p2) = (at(-2), at(-1), d[j].as_ref(), at(1), at(2));
                for (i, x) in o.as_mut().iter_mut().enumerate() {
                    *x += c * (p2[i] - 4.0 * p1[i] + 6.0 * z[i] - 4.0 * m1[i] + m2[i]);
                }
            });
        }
    }

    /// Scalar symbol of the stabilization at mode `m` per axis.
    pub fn stabilization_symbol(&self, modes: [i64; 2]) -> f64 {
        let dx = self.grid.dx();
        let kappa = 2.0 * std::f64::consts::PI / self.grid.length();
        self.grid
            .axes()
            .iter()
            .map(|a| {
                let s = (0.5 * kappa * modes[a.index()] as f64 * dx).sin();
                16.0 * s.powi(4)
            })
            .sum::<f64>()
            * self.theta4
            / dx
    }

    /// Fourier symbol of `D_imp` for a uniform reference at integer modes:
    /// `σ(k) I + i Σ_s sin(k_s Δx)/Δx · A_s`, row-major.
    pub fn symbol(&self, modes: [i64; 2]) -> Result<Vec<Complex64>> {
        let Jacobians::Uniform(mats) = &self.jacobians else {
            return Err(Error::Unsupported("Fourier symbol needs a uniform reference".into()));
        };
        let m = D::VARS;
        let dx = self.grid.dx();
        let kappa = 2.0 * std::f64::consts::PI / self.grid.length();
        let sigma = self.stabilization_symbol(modes);
        let mut out = vec![Complex64::new(0.0, 0.0); m * m];
        for (i, o) in out.iter_mut().enumerate() {
            if i / m == i % m {
                o.re = sigma;
            }
        }
        for &a in self.grid.axes() {
            let kt = (kappa * modes[a.index()] as f64 * dx).sin() / dx;
            for (o, aij) in out.iter_mut().zip(mats[a.index()].as_ref()) {
                o.im += kt * aij;
            }
        }
        Ok(out)
    }
}
