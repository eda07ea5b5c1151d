//! Periodic uniform grids, grid fields and the spatial operators of the scheme.

mod field;
mod flux;
mod implicit;
mod io;
mod spectral;

pub use field::{fluctuation_linf, ConservedField, VectorField};
pub(crate) use flux::rusanov_divergence;
pub use flux::{
    explicit_divergence, max_nonstiff_speed, nonstiff_interface_flux, nonstiff_numerical_flux, nonstiff_wave_speed,
};
pub use implicit::{central_divergence, ImplicitDivergence, DEFAULT_THETA4};
pub use io::{read_field, write_field};
pub use spectral::{divergence_spectral, SpectralOperator};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservedState, Dimension};

/// Reference state `w_R` frozen over one time step, either one state for the
/// whole grid or one state per cell.
#[derive(Debug, Clone, PartialEq)]
pub enum FrozenReference<D: Dimension> {
    Uniform(D::Vector),
    PerCell(Vec<D::Vector>),
}

impl<D: Dimension> FrozenReference<D> {
    pub fn uniform(state: &ConservedState<D>) -> Self {
        Self::Uniform(*state.as_vector())
    }

    pub fn per_cell(field: &ConservedField<D>) -> Self {
        Self::PerCell(field.data().to_vec())
    }

    pub fn at(&self, j: usize) -> &D::Vector {
        match self {
            Self::Uniform(v) => v,
            Self::PerCell(v) => &v[j],
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, Self::Uniform(_))
    }

    /// Cell-average of the reference.
    pub fn mean(&self) -> D::Vector {
        match self {
            Self::Uniform(v) => *v,
            Self::PerCell(v) => {
                let mut out = D::Vector::default();
                for x in v {
                    for (o, xi) in out.as_mut().iter_mut().zip(x.as_ref()) {
                        *o += xi;
                    }
                }
                for o in out.as_mut() {
                    *o /= v.len() as f64;
                }
                out
            }
        }
    }

    pub(crate) fn check_len(&self, cells: usize) -> Result<()> {
        match self {
            Self::PerCell(v) if v.len() != cells => Err(Error::DimensionMismatch {
                expected: cells,
                found: v.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// Uniform periodic grid on `[−L/2, L/2)^d` with `N` points per axis.
///
/// Points sit at `x_i = −L/2 + iΔx`, so a grid with `N` points is the
/// injection of any grid with `2N`. In 2D the flat cell index is
/// `ix·N + iy` (lexicographic in `(ix, iy)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    dim: usize,
    cells: usize,
    length: f64,
}

pub const DEFAULT_LENGTH: f64 = 2.0 * PI;

impl PeriodicGrid {
    pub fn new(dim: usize, cells: usize, length: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if cells < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 cells per axis, got {cells}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "domain length must be positive, got {length}"
            )));
        }
        Ok(Self { dim, cells, length })
    }

    /// Grid on `[−π, π)^d`.
    pub fn standard(dim: usize, cells: usize) -> Result<Self> {
        Self::new(dim, cells, DEFAULT_LENGTH)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn num_cells(&self) -> usize {
        self.cells.pow(self.dim as u32)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    /// Per-axis indices of a flat cell index.
    pub fn indices(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.cells, idx % self.cells]
        }
    }

    pub fn flat_index(&self, ix: usize, iy: usize) -> usize {
        if self.dim == 1 {
            ix
        } else {
            ix * self.cells + iy
        }
    }

    /// Point coordinates of a cell; the second entry is 0 in 1D.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let [ix, iy] = self.indices(idx);
        if self.dim == 1 {
            [self.coordinate(ix), 0.0]
        } else {
            [self.coordinate(ix), self.coordinate(iy)]
        }
    }

    /// Index of the cell `offset` steps away along `axis`, wrapping periodically.
    pub fn neighbor(&self, idx: usize, axis: Axis, offset: isize) -> usize {
        let n = self.cells as isize;
        let [ix, iy] = self.indices(idx);
        let shift = |i: usize| (i as isize + offset).rem_euclid(n) as usize;
        match axis {
            Axis::X => self.flat_index(shift(ix), iy),
            Axis::Y => self.flat_index(ix, shift(iy)),
        }
    }

    pub fn axes(&self) -> &'static [Axis] {
        Axis::up_to(self.dim)
    }

    /// Whether `other` is this grid coarsened by an integer factor per axis.
    pub fn coarsening_factor(&self, coarse: &PeriodicGrid) -> Option<usize> {
        if coarse.dim != self.dim
            || (coarse.length - self.length).abs() > 1e-12 * self.length
            || !self.cells.is_multiple_of(coarse.cells)
        {
            return None;
        }
        Some(self.cells / coarse.cells)
    }
}
