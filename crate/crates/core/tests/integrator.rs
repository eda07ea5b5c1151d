use stiff_euler::integrator::{cfl_time_step, run, step, ReferenceStrategy, SchemeForm, SolverKind, StepConfig};
use stiff_euler::lab::{make_well_prepared, WellPreparedSpec};
use stiff_euler::{ConservedField, ConservedState, Dimension, GasParams, OneD, PeriodicGrid, TwoD};

fn vortex(n: usize, eps: f64) -> ConservedField<TwoD> {
    let grid = PeriodicGrid::standard(2, n).unwrap();
    let gas = GasParams::new(1.4, eps).unwrap();
    make_well_prepared(&WellPreparedSpec::default(), &grid, &gas).unwrap()
}

fn max_diff<D: Dimension>(a: &ConservedField<D>, b: &ConservedField<D>) -> f64 {
    a.difference(b).max_abs()
}

fn relative_sum_change<D: Dimension>(a: &ConservedField<D>, b: &ConservedField<D>) -> f64 {
    let (sa, sb) = (a.sums(), b.sums());
    let scale: f64 = a.flat().iter().map(|x| x.abs()).sum();
    sa.as_ref()
        .iter()
        .zip(sb.as_ref())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn zero_steps_return_the_initial_field() {
    let w = vortex(16, 0.1);
    let traj = run(
        &w,
        &ReferenceStrategy::PreviousStep,
        &StepConfig::new(0.01),
        0,
        |_, _, _| Ok(()),
    )
    .unwrap();
    assert_eq!(traj.final_field.data(), w.data());
    assert!(traj.reports.is_empty());
}

#[test]
fn constant_state_does_not_drift_over_100_steps() {
    let grid = PeriodicGrid::standard(1, 32).unwrap();
    let gas = GasParams::new(1.4, 1e-3).unwrap();
    let s = ConservedState::<OneD>::from_primitive(0.8, &[1.3], 2.0, &gas).unwrap();
    let w = ConservedField::constant(grid, gas, s).unwrap();
    for reference in [ReferenceStrategy::PreviousStep, ReferenceStrategy::Constant(s)] {
        let traj = run(&w, &reference, &StepConfig::new(0.1), 100, |_, _, _| Ok(())).unwrap();
        assert!(max_diff(&traj.final_field, &w) <= 1e-12);
    }
}

#[test]
fn well_prepared_vortex_runs_with_tight_residuals() {
    let w = vortex(32, 1e-2);
    let dt = cfl_time_step(&w, StepConfig::DEFAULT_CFL).unwrap();
    let mut steps = 0;
    let traj = run(
        &w,
        &ReferenceStrategy::PreviousStep,
        &StepConfig::new(dt),
        20,
        |n, next, report| {
            steps = n;
            assert!(report.residual <= 1e-12, "step {n}: {report:?}");
            assert!(next.pressure().iter().all(|p| *p > 0.0));
            Ok(())
        },
    )
    .unwrap();
    assert_eq!(steps, 20);
    assert_eq!(traj.reports.len(), 20);
    assert!(relative_sum_change(&traj.final_field, &w) <= 1e-12);
}

#[test]
fn every_step_conserves_cell_sums() {
    let w = vortex(16, 0.05);
    let dt = cfl_time_step(&w, StepConfig::DEFAULT_CFL).unwrap();
    let cases = [
        (ReferenceStrategy::PreviousStep, SolverKind::iterative()),
        (
            ReferenceStrategy::Constant(w.mean_state().unwrap()),
            SolverKind::FourierExact,
        ),
    ];
    for (reference, solver) in cases {
        let mut prev = w.clone();
        run(
            &w,
            &reference,
            &StepConfig::new(dt).with_solver(solver),
            5,
            |_, next, _| {
                assert!(relative_sum_change(next, &prev) <= 1e-12);
                prev = next.clone();
                Ok(())
            },
        )
        .unwrap();
    }
}

#[test]
fn scheme_forms_agree_at_every_step() {
    let grid = PeriodicGrid::standard(1, 32).unwrap();
    let gas = GasParams::new(1.4, 0.05).unwrap();
    let spec = WellPreparedSpec {
        density_amplitude: 0.2,
        ..WellPreparedSpec::one_d(1.0, 1.0, 0.5)
    };
    let mut w = make_well_prepared::<OneD>(&spec, &grid, &gas).unwrap();
    let cfg = StepConfig::new(0.02).with_solver(SolverKind::Dense);
    for _ in 0..5 {
        let r = ReferenceStrategy::PreviousStep;
        let (a, _) = step(&w, &r, &cfg).unwrap();
        let (b, _) = step(&w, &r, &cfg.with_form(SchemeForm::Split)).unwrap();
        let (c, _) = step(&w, &r, &cfg.with_form(SchemeForm::Homogeneous)).unwrap();
        assert!(max_diff(&a, &b) <= 1e-12 && max_diff(&a, &c) <= 1e-12);
        w = a;
    }
}

// A shear flow u = (cos y, 0) has no flux differences along x and a constant
// y-flux, so under the previous-step reference it is an exact fixed point.
#[test]
fn steady_shear_is_a_fixed_point() {
    let grid = PeriodicGrid::standard(2, 16).unwrap();
    let gas = GasParams::new(1.4, 1e-2).unwrap();
    let w = make_well_prepared::<TwoD>(&WellPreparedSpec::shear(), &grid, &gas).unwrap();
    let traj = run(
        &w,
        &ReferenceStrategy::PreviousStep,
        &StepConfig::new(0.05),
        10,
        |_, _, _| Ok(()),
    )
    .unwrap();
    assert!(
        max_diff(&traj.final_field, &w) <= 1e-13,
        "{}",
        max_diff(&traj.final_field, &w)
    );
}

#[test]
fn hook_error_aborts_the_run() {
    let w = vortex(16, 0.1);
    let err = run(
        &w,
        &ReferenceStrategy::PreviousStep,
        &StepConfig::new(0.01),
        10,
        |n, _, _| {
            if n == 3 {
                Err(stiff_euler::Error::Unsupported("stop".into()))
            } else {
                Ok(())
            }
        },
    );
    assert!(err.is_err());
}
