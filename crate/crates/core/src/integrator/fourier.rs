use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{ConservedState, Dimension};
use crate::gas::GasParams;
use crate::grid::{FrozenReference, ImplicitDivergence, PeriodicGrid, SpectralOperator, VectorField};

/// Condition estimates above this are treated as singular.
const SINGULAR_CONDITION: f64 = 1e14;

/// Direct solver for `(I + Δt·D_imp) x = b` when the reference is uniform:
/// one `m × m` complex block per Fourier mode, inverted up front.
#[derive(Debug, Clone)]
pub struct FourierSolver<D: Dimension> {
    spectral: SpectralOperator,
    inverses: Vec<Complex64>,
    max_condition: f64,
    _dim: std::marker::PhantomData<D>,
}

fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl<D: Dimension> FourierSolver<D> {
    pub fn new(op: &ImplicitDivergence<D>, dt: f64) -> Result<Self> {
        if !op.is_uniform() {
            return Err(Error::Unsupported(
                "the Fourier-exact solver needs a spatially constant reference".into(),
            ));
        }
        let grid = *op.grid();
        let spectral = SpectralOperator::new(&grid);
        let m = D::VARS;
        let blocks: Vec<(Vec<Complex64>, f64)> = (0..grid.num_cells())
            .into_par_iter()
            .map(|idx| {
                let modes = spectral.modes(idx);
                let symbol = op.symbol(modes)?;
                let b = DMatrix::from_fn(m, m, |r, c| {
                    let id = if r == c { 1.0 } else { 0.0 };
                    Complex64::new(id, 0.0) + symbol[r * m + c] * dt
                });
                let inv = b.clone().try_inverse().ok_or(Error::SingularBlock {
                    wavenumber: modes,
                    condition: f64::INFINITY,
                })?;
                let condition = inf_norm(&b) * inf_norm(&inv);
                if !(condition < SINGULAR_CONDITION) {
                    return Err(Error::SingularBlock {
                        wavenumber: modes,
                        condition,
                    });
                }
                let flat = (0..m * m).map(|i| inv[(i / m, i % m)]).collect();
                Ok((flat, condition))
            })
            .collect::<Result<_>>()?;
        let max_condition = blocks.iter().map(|b| b.1).fold(0.0, f64::max);
        let inverses = blocks.into_iter().flat_map(|b| b.0).collect();
        Ok(Self {
            spectral,
            inverses,
            max_condition,
            _dim: std::marker::PhantomData,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.spectral.grid()
    }

    /// Largest `‖B_k‖∞‖B_k⁻¹‖∞` over all modes.
    pub fn max_condition(&self) -> f64 {
        self.max_condition
    }

    pub fn solve(&self, rhs: &VectorField<D>) -> VectorField<D> {
        let m = D::VARS;
        let grid = *self.grid();
        let hats: Vec<Vec<Complex64>> = (0..m)
            .into_par_iter()
            .map(|c| self.spectral.forward(&rhs.component(c)))
            .collect();
        let mut sol = vec![vec![Complex64::default(); grid.num_cells()]; m];
        for (idx, block) in self.inverses.chunks_exact(m * m).enumerate() {
            for r in 0..m {
                sol[r][idx] = (0..m).map(|c| block[r * m + c] * hats[c][idx]).sum();
            }
        }
        let real: Vec<Vec<f64>> = sol.par_iter().map(|s| self.spectral.inverse(s)).collect();
        let mut out = VectorField::<D>::zeros(grid);
        for (j, w) in out.data_mut().iter_mut().enumerate() {
            for (c, x) in w.as_mut().iter_mut().enumerate() {
                *x = real[c][j];
            }
        }
        out
    }
}

/// Solves `(I + Δt·D_imp[f′(w_R)]) x = rhs` for a spatially constant `w_R`
/// mode by mode. Returns the solution and the largest block condition estimate.
pub fn solve_fourier_exact<D: Dimension>(
    rhs: &VectorField<D>,
    reference: &ConservedState<D>,
    dt: f64,
    gas: &GasParams,
    theta4: f64,
) -> Result<(VectorField<D>, f64)> {
    let op = ImplicitDivergence::new(rhs.grid(), gas, &FrozenReference::uniform(reference), theta4)?;
    let solver = FourierSolver::new(&op, dt)?;
    Ok((solver.solve(rhs), solver.max_condition()))
}
