use crate::euler::Dimension;
use crate::grid::{central_divergence, fluctuation_linf, ConservedField, SpectralOperator};

/// Low Mach diagnostics of one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsReport {
    pub step: usize,
    /// `‖ρ − mean ρ‖∞`.
    pub rho_fluct: f64,
    /// `‖p − mean p‖∞`.
    pub p_fluct: f64,
    /// `‖∇·u‖∞` with the central difference used by the implicit stencil.
    pub div_u: f64,
    /// `‖∇·u‖∞` with spectral derivatives.
    pub div_u_spectral: f64,
    pub mean_p: f64,
}

pub fn diagnostics<D: Dimension>(step: usize, w: &ConservedField<D>, spectral: &SpectralOperator) -> DiagnosticsReport {
    let p = w.pressure();
    let velocity: Vec<Vec<f64>> = (0..D::DIM).map(|a| w.velocity(a)).collect();
    let central = central_divergence::<D, _>(w.grid(), |j, axis| {
        let mut g = D::Vector::default();
        g.as_mut()[0] = velocity[axis.index()][j];
        g
    });
    let refs: Vec<&[f64]> = velocity.iter().map(|v| v.as_slice()).collect();
    let spec = spectral.divergence(&refs);
    DiagnosticsReport {
        step,
        rho_fluct: fluctuation_linf(&w.density()),
        p_fluct: fluctuation_linf(&p),
        div_u: central.component(0).iter().fold(0.0, |m, x| m.max(x.abs())),
        div_u_spectral: spec.iter().fold(0.0, |m, x| m.max(x.abs())),
        mean_p: p.iter().sum::<f64>() / p.len() as f64,
    }
}
