use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Coefficients of the Fourier-space relation between the linearized
/// pressure and its source,
/// `ε²ω₀ + ε²ikω₁ − ω₂k² − ω₃ik³`, about a constant state `(ρ̄, ū, Ē, p̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaCoefficients {
    pub omega: [f64; 4],
    pub gamma: f64,
    pub dt: f64,
    pub velocity: f64,
    pub rho: f64,
    pub energy: f64,
    pub pressure: f64,
}

pub fn omega_coefficients(
    gas: &GasParams,
    dt: f64,
    velocity: f64,
    rho: f64,
    energy: f64,
    pressure: f64,
) -> Result<OmegaCoefficients> {
    omega_from_gamma(gas.gamma(), dt, velocity, rho, energy, pressure)
}

/// As [`omega_coefficients`] but with a bare `γ`.
pub fn omega_from_gamma(
    gamma: f64,
    dt: f64,
    velocity: f64,
    rho: f64,
    energy: f64,
    pressure: f64,
) -> Result<OmegaCoefficients> {
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must be finite and > 1",
        });
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "must be positive",
        });
    }
    let g1 = gamma - 1.0;
    let (u, e, p) = (velocity, energy, pressure);
    let omega = [
        -1.0 / g1,
        -dt * u * (5.0 + gamma) / (2.0 * g1),
        dt * dt / rho * ((-gamma - 5.0) / g1 * e + (gamma * gamma + 5.0) / (g1 * g1) * p),
        dt.powi(3) * u / rho * (-2.0 / g1 * e + (gamma * gamma - gamma + 2.0) / (g1 * g1) * p),
    ];
    Ok(OmegaCoefficients {
        omega,
        gamma,
        dt,
        velocity,
        rho,
        energy,
        pressure,
    })
}

impl OmegaCoefficients {
    /// Symbol `ε²ω₀ + ε²ikω₁ − ω₂k² − ω₃ik³` at wavenumber `k`.
    pub fn symbol(&self, eps: f64, k: f64) -> num_complex::Complex64 {
        let [w0, w1, w2, w3] = self.omega;
        let e2 = eps * eps;
        num_complex::Complex64::new(e2 * w0 - w2 * k * k, e2 * k * w1 - w3 * k.powi(3))
    }
}

type Poly = Vec<f64>;

fn poly_mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Polynomial in `γ` (ascending coefficients) that vanishes exactly when
/// `ω₂ = ω₃ = 0` has a solution `(Ē, p̄) ≠ 0` at `ū ≠ 0`.
///
/// After clearing the `(γ−1)²` denominators, `ω₂` and `ω₃` are linear forms
/// in `(Ē, p̄)` with coefficients
/// `ω₂ ∝ −(γ+5)(γ−1)·Ē + (γ²+5)·p̄` and `ω₃ ∝ −2(γ−1)·Ē + (γ²−γ+2)·p̄`;
/// the polynomial is their determinant.
pub fn simultaneous_zero_polynomial() -> Poly {
    let gm1 = [-1.0, 1.0];
    let a = poly_mul(&[-5.0, -1.0], &gm1);
    let b = vec![5.0, 0.0, 1.0];
    let c = poly_mul(&[-2.0], &gm1);
    let d = vec![2.0, -1.0, 1.0];
    let mut det = poly_sub(&poly_mul(&a, &d), &poly_mul(&b, &c));
    while det.last().is_some_and(|x| x.abs() < 1e-14) {
        det.pop();
    }
    det
}

/// Real roots of a polynomial with ascending coefficients, from the
/// eigenvalues of its companion matrix, sorted ascending.
pub fn real_roots(poly: &[f64]) -> Vec<f64> {
    let mut p = poly.to_vec();
    while p.last().is_some_and(|x| *x == 0.0) {
        p.pop();
    }
    let deg = p.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let companion = DMatrix::from_fn(deg, deg, |r, c| {
        if c == deg - 1 {
            -p[r] / lead
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| z.re)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// Roots of [`simultaneous_zero_polynomial`] other than `γ = 1`, where the
/// coefficients are undefined.
pub fn simultaneous_zero_roots() -> Vec<f64> {
    let mut roots: Vec<f64> = real_roots(&simultaneous_zero_polynomial())
        .into_iter()
        .filter(|r| (r - 1.0).abs() > 1e-6)
        .collect();
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    roots
}
