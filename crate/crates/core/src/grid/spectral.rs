use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::PeriodicGrid;
use crate::euler::Axis;

/// FFT-based operators for scalar fields on a periodic grid.
///
/// Coefficients returned by [`forward`](Self::forward) are normalised so that
/// `v(x) = Σ_k v̂(k) e^{ik·x}`; the `k = 0` coefficient is the mean.
#[derive(Clone)]
pub struct SpectralOperator {
    grid: PeriodicGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralOperator").field("grid", &self.grid).finish()
    }
}

impl SpectralOperator {
    pub fn new(grid: &PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.cells_per_axis();
        Self {
            grid: *grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Signed integer mode of FFT index `i` (`−N/2 ≤ m < N/2`).
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.grid.cells_per_axis();
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Integer modes `(m_x, m_y)` of a flat coefficient index.
    pub fn modes(&self, idx: usize) -> [i64; 2] {
        let [ix, iy] = self.grid.indices(idx);
        if self.grid.dim() == 1 {
            [self.mode(ix), 0]
        } else {
            [self.mode(ix), self.mode(iy)]
        }
    }

    /// Physical wavevector `2π m / L` of a flat coefficient index.
    pub fn wavevector(&self, idx: usize) -> [f64; 2] {
        let scale = 2.0 * PI / self.grid.length();
        let [mx, my] = self.modes(idx);
        [mx as f64 * scale, my as f64 * scale]
    }

    fn is_nyquist(&self, idx: usize, axis: Axis) -> bool {
        let n = self.grid.cells_per_axis() as i64;
        n % 2 == 0 && self.modes(idx)[axis.index()] == -n / 2
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.grid.num_cells());
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, &self.forward);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    pub fn inverse_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.grid.num_cells());
        let mut buf = coeffs.to_vec();
        self.transform(&mut buf, &self.inverse);
        buf
    }

    /// Real part of the inverse transform.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        self.inverse_complex(coeffs).into_iter().map(|c| c.re).collect()
    }

    fn transform(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.grid.cells_per_axis();
        if self.grid.dim() == 1 {
            plan.process(buf);
            return;
        }
        // rows: iy is contiguous
        plan.process(buf);
        let mut column = vec![Complex64::default(); n];
        for iy in 0..n {
            for ix in 0..n {
                column[ix] = buf[ix * n + iy];
            }
            plan.process(&mut column);
            for ix in 0..n {
                buf[ix * n + iy] = column[ix];
            }
        }
    }

    /// Multiplies every Fourier coefficient by `symbol(idx, k)`.
    pub fn apply_symbol<F>(&self, values: &[f64], symbol: F) -> Vec<f64>
    where
        F: Fn(usize, [f64; 2]) -> Complex64,
    {
        let mut hat = self.forward(values);
        for (idx, c) in hat.iter_mut().enumerate() {
            *c *= symbol(idx, self.wavevector(idx));
        }
        self.inverse(&hat)
    }

    /// Spectral `∂/∂x_axis`; the Nyquist mode is dropped.
    pub fn derivative(&self, values: &[f64], axis: Axis) -> Vec<f64> {
        self.apply_symbol(values, |idx, k| {
            if self.is_nyquist(idx, axis) {
                Complex64::default()
            } else {
                Complex64::new(0.0, k[axis.index()])
            }
        })
    }

    /// Spectral divergence of a vector field given component-wise.
    pub fn divergence(&self, components: &[&[f64]]) -> Vec<f64> {
        assert_eq!(components.len(), self.grid.dim());
        let mut out = vec![0.0; self.grid.num_cells()];
        for (axis, comp) in self.grid.axes().iter().zip(components) {
            for (o, d) in out.iter_mut().zip(self.derivative(comp, *axis)) {
                *o += d;
            }
        }
        out
    }

    pub fn gradient(&self, values: &[f64]) -> Vec<Vec<f64>> {
        self.grid.axes().iter().map(|a| self.derivative(values, *a)).collect()
    }

    /// Zero-mean solution of `Δφ = rhs`; the mean of `rhs` is ignored.
    pub fn poisson(&self, rhs: &[f64]) -> Vec<f64> {
        self.apply_symbol(rhs, |_, k| {
            let k2 = k[0] * k[0] + k[1] * k[1];
            if k2 == 0.0 {
                Complex64::default()
            } else {
                Complex64::new(-1.0 / k2, 0.0)
            }
        })
    }
}

/// Spectral divergence of a vector field given component-wise.
pub fn divergence_spectral(op: &SpectralOperator, components: &[&[f64]]) -> Vec<f64> {
    op.divergence(components)
}
