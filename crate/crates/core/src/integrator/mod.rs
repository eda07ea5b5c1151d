//! One step of the linearly implicit reference-state scheme
//!
//! `(wⁿ⁺¹ − wⁿ)/Δt = −∇·( f(wⁿ) + f′(w_R)(wⁿ⁺¹ − wⁿ) )`
//!
//! and drivers that repeat it. The stiff linear part `f̃(·; w_R)` is implicit
//! and the non-stiff remainder `f̂` explicit, so each step is one linear
//! solve with the operator `I + Δt·D_imp`.

mod dense;
mod fourier;
mod gmres;
mod reference;

pub use fourier::{solve_fourier_exact, FourierSolver};
pub use reference::{ReferenceProvider, ReferenceStrategy};

use std::time::Instant;

use crate::error::{Error, Result};
use crate::euler::{mat_vec, Dimension};
use crate::grid::{
    central_divergence, explicit_divergence, max_nonstiff_speed, rusanov_divergence, ConservedField, FrozenReference,
    ImplicitDivergence, VectorField, DEFAULT_THETA4,
};

/// Linear solver for `(I + Δt·D_imp) x = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    /// Per-mode direct solve; needs a spatially constant reference.
    FourierExact,
    /// Restarted GMRES preconditioned by the Fourier solve at the mean reference.
    Iterative { tol: f64, max_iter: usize },
    /// LU of the assembled matrix; small systems only.
    Dense,
}

impl SolverKind {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_ITER: usize = 500;

    pub fn iterative() -> Self {
        Self::Iterative {
            tol: Self::DEFAULT_TOL,
            max_iter: Self::DEFAULT_MAX_ITER,
        }
    }
}

/// Which algebraically equivalent assembly of the step to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeForm {
    /// `(I + Δt D_imp) δ = −Δt D_exp[wⁿ]`, `wⁿ⁺¹ = wⁿ + δ`.
    Unified,
    /// `f̃` implicit and `f̂` explicit, solved directly for `wⁿ⁺¹`.
    Split,
    /// `−∇·(f′(wⁿ) wⁿ⁺¹)`; only valid with the previous-step reference.
    Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub dt: f64,
    /// Courant number for the non-stiff part.
    pub cfl: f64,
    /// Reject `dt` above the non-stiff CFL limit.
    pub cfl_guard: bool,
    pub solver: SolverKind,
    /// Fourth-difference stabilization coefficient of the implicit operator.
    pub theta4: f64,
    pub form: SchemeForm,
}

impl StepConfig {
    pub const DEFAULT_CFL: f64 = 0.45;

    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            cfl: Self::DEFAULT_CFL,
            cfl_guard: false,
            solver: SolverKind::iterative(),
            theta4: DEFAULT_THETA4,
            form: SchemeForm::Unified,
        }
    }

    pub fn with_solver(mut self, solver: SolverKind) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_form(mut self, form: SchemeForm) -> Self {
        self.form = form;
        self
    }

    pub fn with_theta4(mut self, theta4: f64) -> Self {
        self.theta4 = theta4;
        self
    }

    pub fn with_cfl_guard(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self.cfl_guard = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: self.dt,
                reason: "must be positive and finite",
            });
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "cfl",
                value: self.cfl,
                reason: "must be positive and finite",
            });
        }
        if let SolverKind::Iterative { tol, max_iter } = self.solver {
            if !(tol > 0.0) || max_iter == 0 {
                return Err(Error::InvalidParameter {
                    name: "tol",
                    value: tol,
                    reason: "iterative solver needs tol > 0 and max_iter ≥ 1",
                });
            }
        }
        Ok(())
    }
}

/// Outcome of the linear solve of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    /// 1-based: step `n + 1` produces `wⁿ⁺¹`.
    pub step: usize,
    /// Relative residual `‖b − Ax‖₂ / ‖b‖₂` of the solved system.
    pub residual: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    /// Largest per-mode condition estimate, when a Fourier solve was involved.
    pub condition: Option<f64>,
}

/// Largest `Δt` allowed by the non-stiff CFL condition
/// `Δt ≤ cfl·Δx / λ̂_max`, where `λ̂_max` is the largest spectral radius of
/// `f′(w_j) − f′(w̄)` about the field mean `w̄`. Infinite for a constant field.
pub fn cfl_time_step<D: Dimension>(w: &ConservedField<D>, cfl: f64) -> Result<f64> {
    let speed = max_nonstiff_speed(w, &w.mean_state()?);
    Ok(if speed > 0.0 {
        cfl * w.grid().dx() / speed
    } else {
        f64::INFINITY
    })
}

fn flat_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Solved<D: Dimension> {
    x: VectorField<D>,
    residual: f64,
    iterations: usize,
    condition: Option<f64>,
}

/// Solves `(I + Δt·D_imp) x = b`.
fn solve_system<D: Dimension>(
    op: &ImplicitDivergence<D>,
    dt: f64,
    b: &VectorField<D>,
    reference: &FrozenReference<D>,
    solver: SolverKind,
) -> Result<Solved<D>> {
    let grid = *op.grid();
    let apply = |x: &[f64]| -> Vec<f64> {
        let v = VectorField::<D>::from_flat(grid, x).expect("length checked by caller");
        let d = op.apply(&v);
        x.iter().zip(d.flat()).map(|(xi, di)| xi + dt * di).collect()
    };
    let residual_of = |x: &VectorField<D>| {
        let bn = flat_norm(b.flat());
        if bn == 0.0 {
            return flat_norm(x.flat());
        }
        let ax = apply(x.flat());
        let r: Vec<f64> = ax.iter().zip(b.flat()).map(|(a, bi)| bi - a).collect();
        flat_norm(&r) / bn
    };
    match solver {
        SolverKind::FourierExact => {
            let fs = FourierSolver::new(op, dt)?;
            let x = fs.solve(b);
            let residual = residual_of(&x);
            Ok(Solved {
                x,
                residual,
                iterations: 1,
                condition: Some(fs.max_condition()),
            })
        }
        SolverKind::Dense => {
            let x = VectorField::from_flat(grid, &dense::dense_solve(apply, b.flat())?)?;
            let residual = residual_of(&x);
            Ok(Solved {
                x,
                residual,
                iterations: 1,
                condition: None,
            })
        }
        SolverKind::Iterative { tol, max_iter } => {
            let mean = FrozenReference::Uniform(reference.mean());
            let mean_op = op.with_reference(&mean)?;
            let pre = FourierSolver::new(&mean_op, dt)?;
            let precondition = |x: &[f64]| -> Vec<f64> {
                let v = VectorField::<D>::from_flat(grid, x).expect("length checked by caller");
                pre.solve(&v).flat().to_vec()
            };
            let out = gmres::gmres(apply, precondition, b.flat(), tol, max_iter, 60)?;
            Ok(Solved {
                x: VectorField::from_flat(grid, &out.x)?,
                residual: out.residual,
                iterations: out.iterations,
                condition: Some(pre.max_condition()),
            })
        }
    }
}

/// Right-hand side of the split form,
/// `wⁿ − Δt·Rus[f̂(wⁿ)] − Δt·C[f(w_R) − f′(w_R)w_R] + Δt·S wⁿ`,
/// with `C` the central divergence and `S` the stabilization.
fn split_rhs<D: Dimension>(
    w: &ConservedField<D>,
    reference: &FrozenReference<D>,
    op: &ImplicitDivergence<D>,
    dt: f64,
) -> VectorField<D> {
    let gas = *w.gas();
    let rus = rusanov_divergence(w, reference);
    let frozen = central_divergence::<D, _>(w.grid(), |j, axis| {
        let r = reference.at(j);
        let mut g = D::flux(r, &gas, axis);
        let ar = mat_vec::<D>(op.jacobian(j, axis), r);
        g.as_mut().iter_mut().zip(ar.as_ref()).for_each(|(gi, a)| *gi -= a);
        g
    });
    let mut b = w.to_vector_field();
    for ((bi, ri), fi) in b.flat_mut().iter_mut().zip(rus.flat()).zip(frozen.flat()) {
        *bi -= dt * (ri + fi);
    }
    op.add_stabilization(&w.to_vector_field(), dt, &mut b);
    b
}

fn step_inner<D: Dimension>(
    w: &ConservedField<D>,
    strategy: &ReferenceStrategy<D>,
    cfg: &StepConfig,
    n: usize,
) -> Result<(ConservedField<D>, StepReport)> {
    cfg.validate()?;
    let start = Instant::now();
    if cfg.cfl_guard {
        let limit = cfl_time_step(w, cfg.cfl)?;
        if cfg.dt > limit {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: cfg.dt,
                reason: "exceeds the non-stiff CFL limit",
            });
        }
    }
    if cfg.form == SchemeForm::Homogeneous && !strategy.is_previous_step() {
        return Err(Error::Unsupported(
            "the homogeneous form needs the previous-step reference".into(),
        ));
    }
    let reference = strategy.resolve(n, n as f64 * cfg.dt, w)?;
    let op = ImplicitDivergence::new(w.grid(), w.gas(), &reference, cfg.theta4)?;
    let dt = cfg.dt;
    let (data, solved) = match cfg.form {
        SchemeForm::Unified => {
            let mut b = explicit_divergence(w, &reference);
            b.flat_mut().iter_mut().for_each(|x| *x *= -dt);
            let solved = solve_system(&op, dt, &b, &reference, cfg.solver)?;
            let data: Vec<D::Vector> = w
                .data()
                .iter()
                .zip(solved.x.data())
                .map(|(wi, di)| {
                    let mut out = *wi;
                    out.as_mut().iter_mut().zip(di.as_ref()).for_each(|(o, d)| *o += d);
                    out
                })
                .collect();
            (data, solved)
        }
        SchemeForm::Split | SchemeForm::Homogeneous => {
            let b = if cfg.form == SchemeForm::Split {
                split_rhs(w, &reference, &op, dt)
            } else {
                let mut b = w.to_vector_field();
                op.add_stabilization(&w.to_vector_field(), dt, &mut b);
                b
            };
            let solved = solve_system(&op, dt, &b, &reference, cfg.solver)?;
            (solved.x.data().to_vec(), solved)
        }
    };
    let next =
        ConservedField::from_raw_checked(*w.grid(), *w.gas(), data).map_err(|(cell, reason)| Error::InvalidStep {
            step: n + 1,
            cell,
            reason,
        })?;
    let report = StepReport {
        step: n + 1,
        residual: solved.residual,
        iterations: solved.iterations,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        condition: solved.condition,
    };
    Ok((next, report))
}

/// Advances `wⁿ` by one step; the reference is resolved for step 0 at `t = 0`.
pub fn step<D: Dimension>(
    w: &ConservedField<D>,
    reference: &ReferenceStrategy<D>,
    cfg: &StepConfig,
) -> Result<(ConservedField<D>, StepReport)> {
    step_inner(w, reference, cfg, 0)
}

/// Advances step `n` (time `n·Δt`).
pub fn step_at<D: Dimension>(
    w: &ConservedField<D>,
    reference: &ReferenceStrategy<D>,
    cfg: &StepConfig,
    n: usize,
) -> Result<(ConservedField<D>, StepReport)> {
    step_inner(w, reference, cfg, n)
}

/// Final field and per-step reports of [`run`].
#[derive(Debug, Clone)]
pub struct Trajectory<D: Dimension> {
    pub final_field: ConservedField<D>,
    pub reports: Vec<StepReport>,
}

/// Repeats [`step_at`] `n_steps` times, calling `hook(n + 1, wⁿ⁺¹, report)`
/// after each step. A hook error aborts the run.
pub fn run<D, H>(
    w0: &ConservedField<D>,
    reference: &ReferenceStrategy<D>,
    cfg: &StepConfig,
    n_steps: usize,
    mut hook: H,
) -> Result<Trajectory<D>>
where
    D: Dimension,
    H: FnMut(usize, &ConservedField<D>, &StepReport) -> Result<()>,
{
    let mut w = w0.clone();
    let mut reports = Vec::with_capacity(n_steps);
    for n in 0..n_steps {
        let (next, report) = step_inner(&w, reference, cfg, n)?;
        hook(n + 1, &next, &report)?;
        reports.push(report);
        w = next;
    }
    Ok(Trajectory {
        final_field: w,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{ConservedState, OneD, TwoD};
    use crate::gas::GasParams;
    use crate::grid::PeriodicGrid;

    fn wavy_1d(n: usize, eps: f64) -> ConservedField<OneD> {
        let g = PeriodicGrid::standard(1, n).unwrap();
        let gas = GasParams::new(1.4, eps).unwrap();
        let e2 = eps * eps;
        let rho: Vec<f64> = (0..n).map(|j| 1.0 + 0.1 * g.coordinate(j).sin()).collect();
        let u: Vec<f64> = (0..n).map(|j| 0.5 + 0.2 * g.coordinate(j).cos()).collect();
        let p: Vec<f64> = (0..n).map(|j| 1.0 + e2 * (2.0 * g.coordinate(j)).cos()).collect();
        ConservedField::from_primitive(g, gas, &rho, &[u], &p).unwrap()
    }

    fn max_diff<D: Dimension>(a: &ConservedField<D>, b: &ConservedField<D>) -> f64 {
        a.difference(b).max_abs()
    }

    #[test]
    fn forms_agree_with_previous_step_reference() {
        let w = wavy_1d(32, 0.1);
        let cfg = StepConfig::new(0.02).with_solver(SolverKind::Dense);
        let r = ReferenceStrategy::PreviousStep;
        let (a, _) = step(&w, &r, &cfg).unwrap();
        let (b, _) = step(&w, &r, &cfg.with_form(SchemeForm::Split)).unwrap();
        let (c, _) = step(&w, &r, &cfg.with_form(SchemeForm::Homogeneous)).unwrap();
        assert!(max_diff(&a, &b) < 1e-12, "{}", max_diff(&a, &b));
        assert!(max_diff(&a, &c) < 1e-12, "{}", max_diff(&a, &c));
        assert!(max_diff(&a, &w) > 1e-6);
    }

    #[test]
    fn fourier_iterative_and_dense_agree_for_constant_reference() {
        let w = wavy_1d(32, 0.05);
        let gas = *w.gas();
        let r = ReferenceStrategy::Constant(ConservedState::from_primitive(1.0, &[0.4], 1.0, &gas).unwrap());
        let cfg = StepConfig::new(0.05);
        let (a, ra) = step(&w, &r, &cfg.with_solver(SolverKind::FourierExact)).unwrap();
        let (b, rb) = step(&w, &r, &cfg.with_solver(SolverKind::iterative())).unwrap();
        let (c, _) = step(&w, &r, &cfg.with_solver(SolverKind::Dense)).unwrap();
        assert!(max_diff(&a, &b) < 1e-10, "{}", max_diff(&a, &b));
        assert!(max_diff(&a, &c) < 1e-10, "{}", max_diff(&a, &c));
        assert!(ra.residual < 1e-12 && rb.residual <= 1e-12, "{ra:?} {rb:?}");
    }

    #[test]
    fn homogeneous_form_needs_previous_step() {
        let w = wavy_1d(16, 0.5);
        let r = ReferenceStrategy::Constant(w.mean_state().unwrap());
        let cfg = StepConfig::new(0.01).with_form(SchemeForm::Homogeneous);
        assert!(matches!(step(&w, &r, &cfg), Err(Error::Unsupported(_))));
        assert!(step(
            &w,
            &r,
            &StepConfig::new(0.01)
                .with_solver(SolverKind::FourierExact)
                .with_form(SchemeForm::Split)
        )
        .is_ok());
    }

    #[test]
    fn fourier_solver_rejects_per_cell_reference() {
        let w = wavy_1d(16, 0.5);
        let cfg = StepConfig::new(0.01).with_solver(SolverKind::FourierExact);
        assert!(step(&w, &ReferenceStrategy::PreviousStep, &cfg).is_err());
    }

    #[test]
    fn constant_state_is_stationary_in_2d() {
        let g = PeriodicGrid::standard(2, 16).unwrap();
        let gas = GasParams::new(1.4, 0.01).unwrap();
        let s = ConservedState::<TwoD>::from_primitive(1.2, &[0.3, -0.7], 0.9, &gas).unwrap();
        let w = ConservedField::constant(g, gas, s).unwrap();
        let traj = run(
            &w,
            &ReferenceStrategy::PreviousStep,
            &StepConfig::new(0.05),
            5,
            |_, _, _| Ok(()),
        )
        .unwrap();
        assert!(max_diff(&traj.final_field, &w) <= 1e-12);
    }

    #[test]
    fn cfl_guard_rejects_large_steps() {
        let w = wavy_1d(32, 0.1);
        let limit = cfl_time_step(&w, 0.45).unwrap();
        assert!(limit.is_finite() && limit > 0.0);
        let r = ReferenceStrategy::PreviousStep;
        assert!(step(&w, &r, &StepConfig::new(2.0 * limit).with_cfl_guard(0.45)).is_err());
        assert!(step(&w, &r, &StepConfig::new(0.5 * limit).with_cfl_guard(0.45)).is_ok());
    }

    #[test]
    fn invalid_post_state_reports_step_and_cell() {
        let g = PeriodicGrid::standard(1, 16).unwrap();
        let gas = GasParams::new(1.4, 1.0).unwrap();
        let rho: Vec<f64> = (0..16).map(|j| if j == 5 { 1e-3 } else { 1.0 }).collect();
        let u: Vec<f64> = (0..16).map(|j| if j < 8 { 3.0 } else { -3.0 }).collect();
        let p: Vec<f64> = (0..16).map(|j| if j == 5 { 1e-3 } else { 1.0 }).collect();
        let w = ConservedField::<OneD>::from_primitive(g, gas, &rho, &[u], &p).unwrap();
        let r = ReferenceStrategy::Constant(ConservedState::from_primitive(1.0, &[0.0], 1.0, &gas).unwrap());
        let err = run(&w, &r, &StepConfig::new(0.5), 3, |_, _, _| Ok(()));
        assert!(matches!(err, Err(Error::InvalidStep { .. })), "{err:?}");
    }
}
