use num_complex::Complex64;
use rayon::prelude::*;

use super::fit::{check_ladder, fit_loglog};
use super::omega::omega_coefficients;
use super::pressure::{linearized_pressure, ThetaOperator};
use super::report::{HilbertProbeReport, OracleRow, ProbeRow};
use super::well_prepared::{make_well_prepared, WellPreparedSpec};
use super::DEFAULT_EPS_LADDER;
use crate::error::Result;
use crate::euler::{ConservedState, OneD};
use crate::gas::GasParams;
use crate::grid::{fluctuation_linf, PeriodicGrid, SpectralOperator, DEFAULT_THETA4};
use crate::integrator::{step, ReferenceStrategy, SolverKind, StepConfig};

/// Primitive variables of a constant 1D reference state; the energy follows
/// from the ε of each ladder point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePrimitives {
    pub rho: f64,
    pub velocity: f64,
    pub pressure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub spec: WellPreparedSpec,
    pub cells: usize,
    pub gamma: f64,
    /// Deliberately away from the data's mean, so that `p̂_L(0) = O(1)`.
    pub reference: ReferencePrimitives,
    pub dt: f64,
    pub theta4: f64,
    pub eps_ladder: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            spec: WellPreparedSpec {
                density_amplitude: 0.3,
                velocity_amplitude: 0.0,
                pressure_amplitude: 0.0,
                ..WellPreparedSpec::one_d(1.0, 1.0, 1.0)
            },
            cells: 64,
            gamma: 1.4,
            reference: ReferencePrimitives {
                rho: 1.1,
                velocity: 0.8,
                pressure: 0.9,
            },
            dt: 0.5,
            theta4: DEFAULT_THETA4,
            eps_ladder: DEFAULT_EPS_LADDER.to_vec(),
        }
    }
}

fn oracle_point(cfg: &OracleConfig, grid: &PeriodicGrid, eps: f64) -> Result<(ProbeRow, OracleRow)> {
    let gas = GasParams::new(cfg.gamma, eps)?;
    let w0 = make_well_prepared::<OneD>(&cfg.spec, grid, &gas)?;
    let r = cfg.reference;
    let w_r = ConservedState::<OneD>::from_primitive(r.rho, &[r.velocity], r.pressure, &gas)?;
    let step_cfg = StepConfig::new(cfg.dt)
        .with_solver(SolverKind::FourierExact)
        .with_theta4(cfg.theta4);
    let (w1, _) = step(&w0, &ReferenceStrategy::Constant(w_r), &step_cfg)?;
    let delta = w1.difference(&crate::grid::ConservedField::constant(*grid, gas, w_r)?);
    let pl = linearized_pressure(&delta, &w_r, &gas)?;

    // δ(ρu) + (Δt/ε²) θ⁻¹ ∂ₓ p_L, with ∂ₓ the central difference
    let theta = ThetaOperator::central(r.velocity, cfg.dt, grid);
    let spectral = SpectralOperator::new(grid);
    let scale = cfg.dt / gas.eps2();
    let correction = spectral.apply_symbol(&pl.values, |_, k| {
        Complex64::new(0.0, theta.derivative_symbol(k[0])) / theta.symbol_at(k[0]) * scale
    });
    let compensated = delta
        .component(1)
        .iter()
        .zip(&correction)
        .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));

    let omega = omega_coefficients(&gas, cfg.dt, r.velocity, r.rho, w_r.energy(), r.pressure)?;
    let omega_symbol_max = pl
        .coefficients
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let k = theta.derivative_symbol(spectral.wavevector(idx)[0]);
            (omega.symbol(eps, k) * c).norm() / gas.eps2()
        })
        .fold(0.0, f64::max);

    let probe = ProbeRow {
        epsilon: eps,
        norm_rho_fluct: fluctuation_linf(&w1.density()),
        norm_p_fluct: fluctuation_linf(&w1.pressure()),
        norm_divu: spectral
            .derivative(&w1.velocity(0), crate::euler::Axis::X)
            .iter()
            .fold(0.0, |m, x| m.max(x.abs())),
        norm_pl_fluct: pl.fluctuation,
        mean_p_drift: 0.0,
    };
    let oracle = OracleRow {
        epsilon: eps,
        pl_mode_zero: pl.coefficients[0].norm(),
        pl_mode_nonzero_max: pl.max_nonzero_mode(),
        compensated_momentum: compensated,
        omega_symbol_max,
    };
    Ok((probe, oracle))
}

/// One exact Fourier step per ε about a constant reference, measuring the
/// ε-scaling of the linearized pressure.
pub fn fourier_pl_oracle(cfg: &OracleConfig) -> Result<HilbertProbeReport> {
    check_ladder(&cfg.eps_ladder)?;
    let grid = PeriodicGrid::standard(1, cfg.cells)?;
    let points: Vec<(ProbeRow, OracleRow)> = cfg
        .eps_ladder
        .par_iter()
        .map(|&eps| oracle_point(cfg, &grid, eps))
        .collect::<Result<_>>()?;
    let (rows, oracle): (Vec<_>, Vec<_>) = points.into_iter().unzip();
    let eps = &cfg.eps_ladder;
    let col = |f: fn(&OracleRow) -> f64| oracle.iter().map(f).collect::<Vec<_>>();
    let slopes = vec![
        fit_loglog("pL_k_nonzero", eps, &col(|r| r.pl_mode_nonzero_max))?,
        fit_loglog("pL_k_zero", eps, &col(|r| r.pl_mode_zero))?,
        fit_loglog("compensated_momentum", eps, &col(|r| r.compensated_momentum))?,
        fit_loglog("omega_symbol", eps, &col(|r| r.omega_symbol_max))?,
    ];
    Ok(HilbertProbeReport {
        context: "oracle_pl".into(),
        rows,
        slopes,
        oracle,
        mean_p_drift: None,
    })
}
