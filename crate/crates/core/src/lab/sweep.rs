use rayon::prelude::*;

use super::diagnostics::diagnostics;
use super::fit::{check_ladder, fit_loglog};
use super::pressure::linearized_pressure_values;
use super::report::{HilbertProbeReport, ProbeRow};
use super::well_prepared::{make_well_prepared, WellPreparedSpec};
use super::DEFAULT_EPS_LADDER;
use crate::error::Result;
use crate::euler::TwoD;
use crate::gas::GasParams;
use crate::grid::{fluctuation_linf, ConservedField, FrozenReference, PeriodicGrid, SpectralOperator, DEFAULT_THETA4};
use crate::integrator::{cfl_time_step, run, ReferenceStrategy, SolverKind, StepConfig};

/// Reference used by an ε-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepReference {
    PreviousStep,
    /// The mean state of the initial data at each ε.
    ConstantMean,
}

impl SweepReference {
    pub fn name(self) -> &'static str {
        match self {
            Self::PreviousStep => "previous_step",
            Self::ConstantMean => "constant",
        }
    }

    fn default_solver(self) -> SolverKind {
        match self {
            Self::PreviousStep => SolverKind::iterative(),
            Self::ConstantMean => SolverKind::FourierExact,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub spec: WellPreparedSpec,
    pub cells: usize,
    pub gamma: f64,
    pub reference: SweepReference,
    /// Fixed step; `None` takes the CFL step of the data at the smallest ε.
    pub dt: Option<f64>,
    pub cfl: f64,
    pub n_steps: usize,
    pub eps_ladder: Vec<f64>,
    pub solver: Option<SolverKind>,
    pub theta4: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            spec: WellPreparedSpec::default(),
            cells: 64,
            gamma: 1.4,
            reference: SweepReference::PreviousStep,
            dt: None,
            cfl: StepConfig::DEFAULT_CFL,
            n_steps: 20,
            eps_ladder: DEFAULT_EPS_LADDER.to_vec(),
            solver: None,
            theta4: DEFAULT_THETA4,
        }
    }
}

impl SweepConfig {
    pub fn grid(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::standard(2, self.cells)
    }

    /// Step size shared by every ladder point.
    pub fn time_step(&self) -> Result<f64> {
        if let Some(dt) = self.dt {
            return Ok(dt);
        }
        let eps = self.eps_ladder.iter().copied().fold(f64::INFINITY, f64::min);
        let gas = GasParams::new(self.gamma, eps)?;
        let w0 = make_well_prepared::<TwoD>(&self.spec, &self.grid()?, &gas)?;
        cfl_time_step(&w0, self.cfl)
    }
}

/// Runs `n_steps` at one ε and returns the max-over-steps norms.
pub fn sweep_point(cfg: &SweepConfig, eps: f64, dt: f64) -> Result<ProbeRow> {
    let grid = cfg.grid()?;
    let gas = GasParams::new(cfg.gamma, eps)?;
    let w0 = make_well_prepared::<TwoD>(&cfg.spec, &grid, &gas)?;
    let strategy = match cfg.reference {
        SweepReference::PreviousStep => ReferenceStrategy::PreviousStep,
        SweepReference::ConstantMean => ReferenceStrategy::Constant(w0.mean_state()?),
    };
    let step_cfg = StepConfig::new(dt)
        .with_solver(cfg.solver.unwrap_or(cfg.reference.default_solver()))
        .with_theta4(cfg.theta4);
    let spectral = SpectralOperator::new(&grid);
    let p0 = diagnostics(0, &w0, &spectral).mean_p;
    let mut prev = w0.clone();
    let mut row = ProbeRow {
        epsilon: eps,
        norm_rho_fluct: 0.0,
        norm_p_fluct: 0.0,
        norm_divu: 0.0,
        norm_pl_fluct: 0.0,
        mean_p_drift: 0.0,
    };
    run(
        &w0,
        &strategy,
        &step_cfg,
        cfg.n_steps,
        |n, w: &ConservedField<TwoD>, _| {
            let d = diagnostics(n, w, &spectral);
            let reference = match &strategy {
                ReferenceStrategy::Constant(s) => FrozenReference::uniform(s),
                _ => FrozenReference::per_cell(&prev),
            };
            let delta = match &strategy {
                ReferenceStrategy::Constant(s) => w.difference(&ConservedField::constant(grid, gas, *s)?),
                _ => w.difference(&prev),
            };
            let pl = linearized_pressure_values(&delta, &reference, &gas);
            row.norm_rho_fluct = row.norm_rho_fluct.max(d.rho_fluct);
            row.norm_p_fluct = row.norm_p_fluct.max(d.p_fluct);
            row.norm_divu = row.norm_divu.max(d.div_u);
            row.norm_pl_fluct = row.norm_pl_fluct.max(fluctuation_linf(&pl));
            row.mean_p_drift = row.mean_p_drift.max((d.mean_p - p0).abs());
            prev = w.clone();
            Ok(())
        },
    )?;
    Ok(row)
}

/// ε-sweep of well-prepared 2D data. Every ladder point uses the same `Δt`.
pub fn ap_sweep(cfg: &SweepConfig) -> Result<HilbertProbeReport> {
    check_ladder(&cfg.eps_ladder)?;
    let dt = cfg.time_step()?;
    let rows: Vec<ProbeRow> = cfg
        .eps_ladder
        .par_iter()
        .map(|&eps| sweep_point(cfg, eps, dt))
        .collect::<Result<_>>()?;
    let eps = &cfg.eps_ladder;
    let col = |f: fn(&ProbeRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let slopes = vec![
        fit_loglog("rho_fluct", eps, &col(|r| r.norm_rho_fluct))?,
        fit_loglog("p_fluct", eps, &col(|r| r.norm_p_fluct))?,
        fit_loglog("div_u", eps, &col(|r| r.norm_divu))?,
    ];
    let mean_p_drift = rows.last().map(|r| r.mean_p_drift);
    Ok(HilbertProbeReport {
        context: format!("ap_sweep:{}", cfg.reference.name()),
        rows,
        slopes,
        oracle: Vec::new(),
        mean_p_drift,
    })
}
