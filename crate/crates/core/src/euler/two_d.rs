use nalgebra::Matrix4;

use super::{Axis, Dimension};
use crate::gas::GasParams;

/// Two space dimensions, `w = (ρ, ρu, ρv, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoD;

impl Dimension for TwoD {
    const DIM: usize = 2;
    const VARS: usize = 4;

    type Vector = [f64; 4];
    type Matrix = [f64; 16];

    fn flux(w: &[f64; 4], gas: &GasParams, axis: Axis) -> [f64; 4] {
        let g = gas.gamma();
        let e2 = gas.eps2();
        let [w1, w2, w3, w4] = *w;
        let pressure_term = (g - 1.0) / e2 * w4;
        match axis {
            Axis::X => [
                w2,
                0.5 * (3.0 - g) * w2 * w2 / w1 + 0.5 * (1.0 - g) * w3 * w3 / w1 + pressure_term,
                w2 * w3 / w1,
                g * w2 * w4 / w1 - 0.5 * e2 * (g - 1.0) * (w2 * w2 * w2 + w2 * w3 * w3) / (w1 * w1),
            ],
            Axis::Y => [
                w3,
                w2 * w3 / w1,
                0.5 * (1.0 - g) * w2 * w2 / w1 + 0.5 * (3.0 - g) * w3 * w3 / w1 + pressure_term,
                g * w3 * w4 / w1 - 0.5 * e2 * (g - 1.0) * (w2 * w2 * w3 + w3 * w3 * w3) / (w1 * w1),
            ],
        }
    }

    fn jacobian(w: &[f64; 4], gas: &GasParams, axis: Axis) -> [f64; 16] {
        let g = gas.gamma();
        let e2 = gas.eps2();
        let [rho, mx, my, e] = *w;
        let u = mx / rho;
        let v = my / rho;
        let q2 = u * u + v * v;
        match axis {
            Axis::X => [
                0.0,
                1.0,
                0.0,
                0.0,
                0.5 * (g - 3.0) * u * u + 0.5 * (g - 1.0) * v * v,
                (3.0 - g) * u,
                (1.0 - g) * v,
                (g - 1.0) / e2,
                -u * v,
                v,
                u,
                0.0,
                -g * e * u / rho + e2 * (g - 1.0) * u * q2,
                g * e / rho - 0.5 * e2 * (g - 1.0) * (3.0 * u * u + v * v),
                e2 * (1.0 - g) * u * v,
                g * u,
            ],
            Axis::Y => [
                0.0,
                0.0,
                1.0,
                0.0,
                -u * v,
                v,
                u,
                0.0,
                0.5 * (g - 1.0) * u * u + 0.5 * (g - 3.0) * v * v,
                (1.0 - g) * u,
                (3.0 - g) * v,
                (g - 1.0) / e2,
                -g * e * v / rho + e2 * (g - 1.0) * v * q2,
                e2 * (1.0 - g) * u * v,
                g * e / rho - 0.5 * e2 * (g - 1.0) * (u * u + 3.0 * v * v),
                g * v,
            ],
        }
    }

    fn jacobian_orders(w0: &[f64; 4], gas: &GasParams, axis: Axis) -> ([f64; 16], [f64; 16]) {
        let g = gas.gamma();
        let [rho, mx, my, e] = *w0;
        let u = mx / rho;
        let v = my / rho;
        let mut m2 = [0.0; 16];
        match axis {
            Axis::X => {
                m2[7] = g - 1.0;
                let m0 = [
                    0.0,
                    1.0,
                    0.0,
                    0.0,
                    0.5 * (g - 3.0) * u * u + 0.5 * (g - 1.0) * v * v,
                    (3.0 - g) * u,
                    (1.0 - g) * v,
                    0.0,
                    -u * v,
                    v,
                    u,
                    0.0,
                    -g * e * u / rho,
                    g * e / rho,
                    0.0,
                    g * u,
                ];
                (m2, m0)
            }
            Axis::Y => {
                m2[11] = g - 1.0;
                let m0 = [
                    0.0,
                    0.0,
                    1.0,
                    0.0,
                    -u * v,
                    v,
                    u,
                    0.0,
                    0.5 * (g - 1.0) * u * u + 0.5 * (g - 3.0) * v * v,
                    (1.0 - g) * u,
                    (3.0 - g) * v,
                    0.0,
                    -g * e * v / rho,
                    0.0,
                    g * e / rho,
                    g * v,
                ];
                (m2, m0)
            }
        }
    }

    fn spectral_radius(m: &[f64; 16]) -> f64 {
        Matrix4::from_row_slice(m)
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn flatten(v: &[[f64; 4]]) -> &[f64] {
        v.as_flattened()
    }

    fn flatten_mut(v: &mut [[f64; 4]]) -> &mut [f64] {
        v.as_flattened_mut()
    }
}
