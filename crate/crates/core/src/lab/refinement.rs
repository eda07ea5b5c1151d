use std::path::Path;

use rayon::prelude::*;

use super::report::{csv_error, fmt_all, writer};
use super::well_prepared::{make_well_prepared, WellPreparedSpec};
use crate::error::{Error, Result};
use crate::euler::TwoD;
use crate::gas::GasParams;
use crate::grid::{ConservedField, PeriodicGrid, DEFAULT_THETA4};
use crate::integrator::{cfl_time_step, run, ReferenceStrategy, SolverKind, StepConfig};

/// Grid refinement against a fine-grid solution at the same ε, with a
/// constant mean reference and the Fourier-exact solver.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementConfig {
    pub spec: WellPreparedSpec,
    pub gamma: f64,
    pub coarse_cells: Vec<usize>,
    pub fine_cells: usize,
    pub eps: Vec<f64>,
    pub final_time: f64,
    pub cfl: f64,
    pub theta4: f64,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        Self {
            spec: WellPreparedSpec::default(),
            gamma: 1.4,
            coarse_cells: vec![32, 64, 128],
            fine_cells: 256,
            eps: vec![1e-1, 1e-2, 1e-3],
            final_time: 0.25,
            cfl: StepConfig::DEFAULT_CFL,
            theta4: DEFAULT_THETA4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementRow {
    pub epsilon: f64,
    pub cells: usize,
    /// `‖ρu − ρu_fine‖₂ / ‖ρu_fine‖₂` over both momentum components.
    pub momentum_error: f64,
    /// `‖ρ − ρ_fine‖∞ / ε²`.
    pub density_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub dt: f64,
    pub steps: usize,
    pub rows: Vec<RefinementRow>,
}

impl RefinementReport {
    /// `max_ε err / min_ε err` of the momentum error at `cells`.
    pub fn spread(&self, cells: usize) -> f64 {
        let errs: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.cells == cells)
            .map(|r| r.momentum_error)
            .collect();
        let max = errs.iter().copied().fold(0.0, f64::max);
        let min = errs.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = writer(path)?;
        let run = |w: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
            w.write_record(["epsilon", "cells", "momentum_error", "density_error"])?;
            for r in &self.rows {
                let mut rec = fmt_all(&[r.epsilon]);
                rec.push(r.cells.to_string());
                rec.extend(fmt_all(&[r.momentum_error, r.density_error]));
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        };
        run(&mut w).map_err(|e| csv_error(path, e))
    }
}

fn evolve(cfg: &RefinementConfig, cells: usize, eps: f64, dt: f64, steps: usize) -> Result<ConservedField<TwoD>> {
    let grid = PeriodicGrid::standard(2, cells)?;
    let gas = GasParams::new(cfg.gamma, eps)?;
    let w0 = make_well_prepared::<TwoD>(&cfg.spec, &grid, &gas)?;
    let reference = ReferenceStrategy::Constant(w0.mean_state()?);
    let step_cfg = StepConfig::new(dt)
        .with_solver(SolverKind::FourierExact)
        .with_theta4(cfg.theta4);
    Ok(run(&w0, &reference, &step_cfg, steps, |_, _, _| Ok(()))?.final_field)
}

/// Fine-grid values at the points of the coarse grid.
pub fn inject(fine: &ConservedField<TwoD>, coarse: &PeriodicGrid) -> Result<Vec<[f64; 4]>> {
    let factor = fine
        .grid()
        .coarsening_factor(coarse)
        .ok_or_else(|| Error::InvalidGrid("coarse grid is not an injection of the fine grid".into()))?;
    Ok((0..coarse.num_cells())
        .map(|j| {
            let [ix, iy] = coarse.indices(j);
            fine.data()[fine.grid().flat_index(ix * factor, iy * factor)]
        })
        .collect())
}

pub fn refinement_study(cfg: &RefinementConfig) -> Result<RefinementReport> {
    let fine_grid = PeriodicGrid::standard(2, cfg.fine_cells)?;
    for &n in &cfg.coarse_cells {
        let coarse = PeriodicGrid::standard(2, n)?;
        if fine_grid.coarsening_factor(&coarse).is_none() {
            return Err(Error::InvalidGrid(format!(
                "{n} cells do not divide the {} fine cells",
                cfg.fine_cells
            )));
        }
    }
    // one Δt for every grid and ε: the CFL step of the fine grid at the smallest ε
    let eps_min = cfg.eps.iter().copied().fold(f64::INFINITY, f64::min);
    let w_fine = make_well_prepared::<TwoD>(&cfg.spec, &fine_grid, &GasParams::new(cfg.gamma, eps_min)?)?;
    let dt_cfl = cfl_time_step(&w_fine, cfg.cfl)?;
    let steps = (cfg.final_time / dt_cfl).ceil().max(1.0) as usize;
    let dt = cfg.final_time / steps as f64;

    let rows: Vec<Vec<RefinementRow>> = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let fine = evolve(cfg, cfg.fine_cells, eps, dt, steps)?;
            cfg.coarse_cells
                .iter()
                .map(|&n| {
                    let coarse_grid = PeriodicGrid::standard(2, n)?;
                    let coarse = evolve(cfg, n, eps, dt, steps)?;
                    let exact = inject(&fine, &coarse_grid)?;
                    let (mut num, mut den, mut rho) = (0.0, 0.0, 0.0f64);
                    for (w, e) in coarse.data().iter().zip(&exact) {
                        num += (w[1] - e[1]).powi(2) + (w[2] - e[2]).powi(2);
                        den += e[1].powi(2) + e[2].powi(2);
                        rho = rho.max((w[0] - e[0]).abs());
                    }
                    Ok(RefinementRow {
                        epsilon: eps,
                        cells: n,
                        momentum_error: (num / den).sqrt(),
                        density_error: rho / (eps * eps),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(RefinementReport {
        dt,
        steps,
        rows: rows.into_iter().flatten().collect(),
    })
}
