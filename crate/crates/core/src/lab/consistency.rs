use std::path::Path;

use rayon::prelude::*;

use super::fit::{check_ladder, fit_loglog, SlopeFit};
use super::report::{csv_error, fmt_all, writer};
use super::well_prepared::{make_well_prepared, WellPreparedSpec};
use crate::error::Result;
use crate::euler::{Axis, ConservedState, TwoD};
use crate::gas::GasParams;
use crate::grid::{PeriodicGrid, SpectralOperator, DEFAULT_THETA4};
use crate::integrator::{step, ReferenceStrategy, SolverKind, StepConfig};

/// Reference velocity used by the consistency probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeReference {
    /// `u_R = uⁿ`, so `δⁿ = 0`.
    PreviousStep,
    /// A constant state with the data's density and pressure and this velocity.
    Constant { velocity: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyConfig {
    pub spec: WellPreparedSpec,
    pub cells: usize,
    pub gamma: f64,
    /// A single small ε stands in for the leading order `u₍₀₎`.
    pub epsilon: f64,
    pub dt_ladder: Vec<f64>,
    pub reference: ProbeReference,
    pub theta4: f64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        Self {
            spec: WellPreparedSpec::default(),
            cells: 64,
            gamma: 1.4,
            epsilon: 1e-3,
            dt_ladder: vec![0.04, 0.02, 0.01, 0.005],
            reference: ProbeReference::PreviousStep,
            theta4: DEFAULT_THETA4,
        }
    }
}

/// Linearization error terms of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub dt: f64,
    /// `E₁` per momentum component `[x, y]`.
    pub e1: [Vec<f64>; 2],
    pub e2: [Vec<f64>; 2],
    pub e1_norm: f64,
    pub e2_norm: f64,
    /// `‖uⁿ − u_Rⁿ‖∞ + ‖∇(uⁿ − u_Rⁿ)‖∞`.
    pub delta: f64,
    /// `Δt(Δt + δⁿ)`, the bound up to its unknown constant.
    pub bound: f64,
}

impl ConsistencyRow {
    pub fn total(&self) -> f64 {
        self.e1_norm + self.e2_norm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub context: String,
    pub rows: Vec<ConsistencyRow>,
    /// Fit of `‖E₁‖ + ‖E₂‖` against `Δt`; absent when the terms vanish.
    pub slope: Option<SlopeFit>,
}

impl ConsistencyReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = writer(path)?;
        let run = |w: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
            w.write_record(["dt", "norm_e1", "norm_e2", "delta", "bound", "context"])?;
            for r in &self.rows {
                let mut rec = fmt_all(&[r.dt, r.e1_norm, r.e2_norm, r.delta, r.bound]);
                rec.push(self.context.clone());
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        };
        run(&mut w).map_err(|e| csv_error(path, e))
    }
}

fn linf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn zip3(a: &[f64], b: &[f64], c: &[f64], f: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).zip(c).map(|((x, y), z)| f(*x, *y, *z)).collect()
}

/// `E₁`, `E₂` for both momentum components from velocities before and after
/// a step and the reference velocity, with spectral derivatives.
pub fn linearization_errors(
    spectral: &SpectralOperator,
    gamma: f64,
    before: [&[f64]; 2],
    after: [&[f64]; 2],
    reference: [&[f64]; 2],
) -> ([Vec<f64>; 2], [Vec<f64>; 2]) {
    let [u0, v0] = before;
    let [u1, v1] = after;
    let [ur, vr] = reference;
    let a = 0.5 * (gamma - 3.0);
    let b = 0.5 * (gamma - 1.0);
    // (γ−3)/2 (q1−q0)(q1+q0−2q_R) + (γ−1)/2 (s1−s0)(s1+s0−2s_R)
    let normal = |q0: &[f64], q1: &[f64], qr: &[f64], s0: &[f64], s1: &[f64], sr: &[f64]| -> Vec<f64> {
        let first = zip3(q0, q1, qr, |x0, x1, xr| a * (x1 - x0) * (x1 + x0 - 2.0 * xr));
        let second = zip3(s0, s1, sr, |x0, x1, xr| b * (x1 - x0) * (x1 + x0 - 2.0 * xr));
        first.iter().zip(&second).map(|(p, q)| p + q).collect()
    };
    // (s1−s0)(q1−q_R) + (q1−q0)(s0−s_R)
    let cross = |q0: &[f64], q1: &[f64], qr: &[f64], s0: &[f64], s1: &[f64], sr: &[f64]| -> Vec<f64> {
        (0..q0.len())
            .map(|j| (s1[j] - s0[j]) * (q1[j] - qr[j]) + (q1[j] - q0[j]) * (s0[j] - sr[j]))
            .collect()
    };
    let neg = |v: Vec<f64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
    let e1x = neg(spectral.derivative(&normal(u0, u1, ur, v0, v1, vr), Axis::X));
    let e1y = neg(spectral.derivative(&normal(v0, v1, vr, u0, u1, ur), Axis::Y));
    let e2x = spectral.derivative(&cross(u0, u1, ur, v0, v1, vr), Axis::Y);
    let e2y = spectral.derivative(&cross(v0, v1, vr, u0, u1, ur), Axis::X);
    ([e1x, e1y], [e2x, e2y])
}

fn probe_point(cfg: &ConsistencyConfig, grid: &PeriodicGrid, dt: f64) -> Result<ConsistencyRow> {
    let gas = GasParams::new(cfg.gamma, cfg.epsilon)?;
    let w0 = make_well_prepared::<TwoD>(&cfg.spec, grid, &gas)?;
    let n = grid.num_cells();
    let (strategy, solver, reference_velocity) = match cfg.reference {
        ProbeReference::PreviousStep => (
            ReferenceStrategy::PreviousStep,
            SolverKind::iterative(),
            [w0.velocity(0), w0.velocity(1)],
        ),
        ProbeReference::Constant { velocity } => {
            let s = ConservedState::<TwoD>::from_primitive(cfg.spec.rho_mean, &velocity, cfg.spec.p_mean, &gas)?;
            (
                ReferenceStrategy::Constant(s),
                SolverKind::FourierExact,
                [vec![velocity[0]; n], vec![velocity[1]; n]],
            )
        }
    };
    let step_cfg = StepConfig::new(dt).with_solver(solver).with_theta4(cfg.theta4);
    let (w1, _) = step(&w0, &strategy, &step_cfg)?;
    let spectral = SpectralOperator::new(grid);
    let before = [w0.velocity(0), w0.velocity(1)];
    let after = [w1.velocity(0), w1.velocity(1)];
    let (e1, e2) = linearization_errors(
        &spectral,
        cfg.gamma,
        [&before[0], &before[1]],
        [&after[0], &after[1]],
        [&reference_velocity[0], &reference_velocity[1]],
    );
    let mut delta_value = 0.0f64;
    let mut delta_grad = 0.0f64;
    for c in 0..2 {
        let diff: Vec<f64> = before[c]
            .iter()
            .zip(&reference_velocity[c])
            .map(|(a, b)| a - b)
            .collect();
        delta_value = delta_value.max(linf(&diff));
        for g in spectral.gradient(&diff) {
            delta_grad = delta_grad.max(linf(&g));
        }
    }
    let delta = delta_value + delta_grad;
    Ok(ConsistencyRow {
        dt,
        e1_norm: linf(&e1[0]).max(linf(&e1[1])),
        e2_norm: linf(&e2[0]).max(linf(&e2[1])),
        e1,
        e2,
        delta,
        bound: dt * (dt + delta),
    })
}

/// Evaluates the flux-linearization error terms after one step for each `Δt`.
pub fn superconsistency_probe(cfg: &ConsistencyConfig) -> Result<ConsistencyReport> {
    check_ladder(&cfg.dt_ladder)?;
    let grid = PeriodicGrid::standard(2, cfg.cells)?;
    let rows: Vec<ConsistencyRow> = cfg
        .dt_ladder
        .par_iter()
        .map(|&dt| probe_point(cfg, &grid, dt))
        .collect::<Result<_>>()?;
    let totals: Vec<f64> = rows.iter().map(ConsistencyRow::total).collect();
    let slope = if totals.iter().all(|t| *t > 0.0) {
        Some(fit_loglog("linearization_error", &cfg.dt_ladder, &totals)?)
    } else {
        None
    };
    let context = match cfg.reference {
        ProbeReference::PreviousStep => "superconsistency:previous_step".to_string(),
        ProbeReference::Constant { velocity } => format!("superconsistency:constant({},{})", velocity[0], velocity[1]),
    };
    Ok(ConsistencyReport { context, rows, slope })
}
