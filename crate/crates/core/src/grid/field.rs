use super::PeriodicGrid;
use crate::error::{Error, Result};
use crate::euler::state::raw_pressure;
use crate::euler::{ConservedState, Dimension};
use crate::gas::GasParams;

/// Unvalidated per-cell vectors on a grid: increments, residuals and
/// right-hand sides of the implicit system.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<D: Dimension> {
    grid: PeriodicGrid,
    data: Vec<D::Vector>,
}

impl<D: Dimension> VectorField<D> {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            data: vec![D::Vector::default(); grid.num_cells()],
        }
    }

    pub fn from_data(grid: PeriodicGrid, data: Vec<D::Vector>) -> Result<Self> {
        check_shape::<D>(&grid, data.len())?;
        Ok(Self { grid, data })
    }

    pub fn from_flat(grid: PeriodicGrid, flat: &[f64]) -> Result<Self> {
        let mut out = Self::zeros(grid);
        if flat.len() != out.flat().len() {
            return Err(Error::DimensionMismatch {
                expected: out.flat().len(),
                found: flat.len(),
            });
        }
        out.flat_mut().copy_from_slice(flat);
        Ok(out)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn data(&self) -> &[D::Vector] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [D::Vector] {
        &mut self.data
    }

    pub fn flat(&self) -> &[f64] {
        D::flatten(&self.data)
    }

    pub fn flat_mut(&mut self) -> &mut [f64] {
        D::flatten_mut(&mut self.data)
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().map(|v| v.as_ref()[c]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Per-component sums over all cells.
    pub fn sums(&self) -> D::Vector {
        sum_cells::<D>(&self.data)
    }
}

/// Conserved variables on a grid; every cell is a valid [`ConservedState`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField<D: Dimension> {
    grid: PeriodicGrid,
    gas: GasParams,
    data: Vec<D::Vector>,
}

impl<D: Dimension> ConservedField<D> {
    pub fn new(grid: PeriodicGrid, gas: GasParams, data: Vec<D::Vector>) -> Result<Self> {
        check_shape::<D>(&grid, data.len())?;
        if let Some(cell) = first_invalid::<D>(&data, &gas) {
            let reason = ConservedState::<D>::from_vector(data[cell], &gas).unwrap_err();
            return Err(Error::InvalidState(format!("cell {cell}: {reason}")));
        }
        Ok(Self { grid, gas, data })
    }

    pub fn constant(grid: PeriodicGrid, gas: GasParams, state: ConservedState<D>) -> Result<Self> {
        Self::new(grid, gas, vec![*state.as_vector(); grid.num_cells()])
    }

    /// Builds a field from density, velocity components and pressure.
    pub fn from_primitive(
        grid: PeriodicGrid,
        gas: GasParams,
        rho: &[f64],
        velocity: &[Vec<f64>],
        pressure: &[f64],
    ) -> Result<Self> {
        if velocity.len() != D::DIM {
            return Err(Error::DimensionMismatch {
                expected: D::DIM,
                found: velocity.len(),
            });
        }
        let n = grid.num_cells();
        check_shape::<D>(&grid, rho.len())?;
        if pressure.len() != n || velocity.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: pressure.len(),
            });
        }
        let mut data = Vec::with_capacity(n);
        let mut vel = vec![0.0; D::DIM];
        for j in 0..n {
            for (a, v) in vel.iter_mut().enumerate() {
                *v = velocity[a][j];
            }
            let s = ConservedState::<D>::from_primitive(rho[j], &vel, pressure[j], &gas)
                .map_err(|e| Error::InvalidState(format!("cell {j}: {e}")))?;
            data.push(*s.as_vector());
        }
        Ok(Self { grid, gas, data })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn data(&self) -> &[D::Vector] {
        &self.data
    }

    pub fn flat(&self) -> &[f64] {
        D::flatten(&self.data)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn state(&self, idx: usize) -> ConservedState<D> {
        ConservedState::from_vector(self.data[idx], &self.gas).expect("field cells are validated on construction")
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().map(|v| v.as_ref()[c]).collect()
    }

    pub fn density(&self) -> Vec<f64> {
        self.component(0)
    }

    pub fn velocity(&self, axis: usize) -> Vec<f64> {
        self.data.iter().map(|v| v.as_ref()[1 + axis] / v.as_ref()[0]).collect()
    }

    pub fn pressure(&self) -> Vec<f64> {
        self.data.iter().map(|v| raw_pressure::<D>(v, &self.gas)).collect()
    }

    /// Per-component sums over all cells.
    pub fn sums(&self) -> D::Vector {
        sum_cells::<D>(&self.data)
    }

    /// State built from the cell averages of the conserved variables.
    pub fn mean_state(&self) -> Result<ConservedState<D>> {
        let mut mean = self.sums();
        let n = self.data.len() as f64;
        mean.as_mut().iter_mut().for_each(|x| *x /= n);
        ConservedState::from_vector(mean, &self.gas)
    }

    /// `self + δ`, validated.
    pub fn add(&self, delta: &VectorField<D>) -> Result<Self> {
        check_shape::<D>(&self.grid, delta.data().len())?;
        let data = self
            .data
            .iter()
            .zip(delta.data())
            .map(|(w, d)| {
                let mut out = *w;
                out.as_mut().iter_mut().zip(d.as_ref()).for_each(|(o, x)| *o += x);
                out
            })
            .collect();
        Self::new(self.grid, self.gas, data)
    }

    /// `self − other` as an unvalidated field.
    pub fn difference(&self, other: &Self) -> VectorField<D> {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut out = *a;
                out.as_mut().iter_mut().zip(b.as_ref()).for_each(|(o, x)| *o -= x);
                out
            })
            .collect();
        VectorField { grid: self.grid, data }
    }

    pub fn to_vector_field(&self) -> VectorField<D> {
        VectorField {
            grid: self.grid,
            data: self.data.clone(),
        }
    }

    /// Converts raw vectors into a field; invalid cells are reported by index.
    pub(crate) fn from_raw_checked(
        grid: PeriodicGrid,
        gas: GasParams,
        data: Vec<D::Vector>,
    ) -> std::result::Result<Self, (usize, String)> {
        if let Some(cell) = first_invalid::<D>(&data, &gas) {
            let reason = ConservedState::<D>::from_vector(data[cell], &gas).unwrap_err();
            return Err((cell, reason.to_string()));
        }
        Ok(Self { grid, gas, data })
    }

    /// Same conserved data interpreted with another ε.
    pub fn with_gas(&self, gas: GasParams) -> Result<Self> {
        Self::new(self.grid, gas, self.data.clone())
    }
}

fn check_shape<D: Dimension>(grid: &PeriodicGrid, len: usize) -> Result<()> {
    if grid.dim() != D::DIM {
        return Err(Error::DimensionMismatch {
            expected: D::DIM,
            found: grid.dim(),
        });
    }
    if len != grid.num_cells() {
        return Err(Error::DimensionMismatch {
            expected: grid.num_cells(),
            found: len,
        });
    }
    Ok(())
}

fn first_invalid<D: Dimension>(data: &[D::Vector], gas: &GasParams) -> Option<usize> {
    data.iter()
        .position(|w| ConservedState::<D>::from_vector(*w, gas).is_err())
}

fn sum_cells<D: Dimension>(data: &[D::Vector]) -> D::Vector {
    let mut out = D::Vector::default();
    for w in data {
        out.as_mut().iter_mut().zip(w.as_ref()).for_each(|(o, x)| *o += x);
    }
    out
}

/// `max |v − mean(v)|`.
pub fn fluctuation_linf(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().fold(0.0, |m, v| m.max((v - mean).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::TwoD;

    #[test]
    fn invalid_cell_is_named() {
        let grid = PeriodicGrid::standard(2, 8).unwrap();
        let gas = GasParams::new(1.4, 0.1).unwrap();
        let mut data = vec![[1.0, 0.0, 0.0, 2.5]; 64];
        data[17][0] = -1.0;
        let err = ConservedField::<TwoD>::new(grid, gas, data).unwrap_err();
        assert!(err.to_string().contains("cell 17"), "{err}");
    }

    #[test]
    fn mean_state_of_constant_field() {
        let grid = PeriodicGrid::standard(2, 8).unwrap();
        let gas = GasParams::new(1.4, 0.1).unwrap();
        let s = ConservedState::<TwoD>::from_primitive(1.3, &[0.2, 0.1], 0.8, &gas).unwrap();
        let f = ConservedField::constant(grid, gas, s).unwrap();
        let m = f.mean_state().unwrap();
        for (a, b) in m.components().iter().zip(s.components()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
