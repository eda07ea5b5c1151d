use nalgebra::Matrix3;

use super::{Axis, Dimension};
use crate::gas::GasParams;

/// One space dimension, `w = (ρ, ρu, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneD;

impl Dimension for OneD {
    const DIM: usize = 1;
    const VARS: usize = 3;

    type Vector = [f64; 3];
    type Matrix = [f64; 9];

    fn flux(w: &[f64; 3], gas: &GasParams, _axis: Axis) -> [f64; 3] {
        let g = gas.gamma();
        let e2 = gas.eps2();
        let [rho, m, e] = *w;
        [
            m,
            0.5 * (3.0 - g) * m * m / rho + (g - 1.0) / e2 * e,
            g * m * e / rho - 0.5 * e2 * (g - 1.0) * m * m * m / (rho * rho),
        ]
    }

    fn jacobian(w: &[f64; 3], gas: &GasParams, _axis: Axis) -> [f64; 9] {
        let g = gas.gamma();
        let e2 = gas.eps2();
        let [rho, m, e] = *w;
        let u = m / rho;
        [
            0.0,
            1.0,
            0.0,
            0.5 * (g - 3.0) * u * u,
            (3.0 - g) * u,
            (g - 1.0) / e2,
            -g * e * u / rho + e2 * (g - 1.0) * u * u * u,
            g * e / rho - 1.5 * e2 * (g - 1.0) * u * u,
            g * u,
        ]
    }

    fn jacobian_orders(w0: &[f64; 3], gas: &GasParams, _axis: Axis) -> ([f64; 9], [f64; 9]) {
        let g = gas.gamma();
        let [rho, m, e] = *w0;
        let u = m / rho;
        let mut m2 = [0.0; 9];
        m2[5] = g - 1.0;
        let m0 = [
            0.0,
            1.0,
            0.0,
            0.5 * (g - 3.0) * u * u,
            (3.0 - g) * u,
            0.0,
            -g * e * u / rho,
            g * e / rho,
            g * u,
        ];
        (m2, m0)
    }

    fn spectral_radius(m: &[f64; 9]) -> f64 {
        Matrix3::from_row_slice(m)
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn flatten(v: &[[f64; 3]]) -> &[f64] {
        v.as_flattened()
    }

    fn flatten_mut(v: &mut [[f64; 3]]) -> &mut [f64] {
        v.as_flattened_mut()
    }
}
