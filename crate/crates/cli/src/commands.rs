use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stiff_euler::euler::flux_jacobian;
use stiff_euler::grid::{read_field, write_field, SpectralOperator};
use stiff_euler::integrator::{cfl_time_step, run, ReferenceStrategy, StepConfig, StepReport};
use stiff_euler::lab::{
    ap_sweep, diagnostics, fourier_pl_oracle, make_well_prepared, omega_coefficients, refinement_study,
    superconsistency_probe, ConsistencyConfig, DiagnosticsReport, HilbertProbeReport, OracleConfig, ProbeReference,
    ReferencePrimitives, RefinementConfig, SweepConfig, SweepReference, WellPreparedSpec,
};
use stiff_euler::{Axis, ConservedField, ConservedState, Dimension, GasParams, OneD, PeriodicGrid, TwoD};

use crate::config::{ExperimentConfig, InitialKind, ReferenceChoice};

/// Collects summary lines; the first line names the config hash.
pub struct Summary {
    text: String,
    pub failed: bool,
}

impl Summary {
    fn new(command: &str, cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            text: format!("command = {command}\nconfig_hash = {}\n", cfg.hash()?),
            failed: false,
        })
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn check(&mut self, name: &str, value: f64, lo: f64, hi: f64) {
        let pass = value >= lo && value <= hi;
        self.failed |= !pass;
        self.line(format!(
            "{name} = {value:.16e} {} [{lo}, {hi}]",
            if pass { "PASS" } else { "FAIL" }
        ));
    }

    fn value(&mut self, name: &str, value: f64) {
        self.line(format!("{name} = {value:.16e}"));
    }

    fn finish(self, out: &Path) -> Result<bool> {
        print!("{}", self.text);
        fs::write(out.join("summary.txt"), &self.text)
            .with_context(|| format!("writing summary in {}", out.display()))?;
        Ok(!self.failed)
    }
}

fn prepare_out(out: &Path, cfg: &ExperimentConfig) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))?;
    fs::write(out.join("config.toml"), cfg.to_toml()?).with_context(|| format!("archiving config in {}", out.display()))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn reference_name(r: ReferenceChoice) -> &'static str {
    match r {
        ReferenceChoice::PreviousStep => "previous_step",
        ReferenceChoice::Constant => "constant",
    }
}

/// Single run; returns whether it succeeded.
pub fn cmd_run(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    prepare_out(out, cfg)?;
    match cfg.dimension {
        1 => run_dim::<OneD>(cfg, out),
        _ => run_dim::<TwoD>(cfg, out),
    }
}

fn initial_field<D: Dimension>(
    cfg: &ExperimentConfig,
    grid: &PeriodicGrid,
    gas: &GasParams,
) -> Result<ConservedField<D>> {
    let init = &cfg.initial;
    match init.kind {
        InitialKind::Constant => {
            let v = init.velocity_mean.unwrap_or([0.0, 0.0]);
            let s = ConservedState::<D>::from_primitive(
                init.rho_mean.unwrap_or(1.0),
                &v[..D::DIM],
                init.p_mean.unwrap_or(1.0),
                gas,
            )?;
            Ok(ConservedField::constant(*grid, *gas, s)?)
        }
        InitialKind::WellPrepared => Ok(make_well_prepared(&init.apply(WellPreparedSpec::default()), grid, gas)?),
        InitialKind::File => {
            let path = init.path.as_deref().context("`initial.path` is not set")?;
            Ok(read_field(path, grid, gas)?)
        }
    }
}

fn run_dim<D: Dimension>(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    let grid = PeriodicGrid::new(D::DIM, cfg.cells, cfg.length)?;
    let gas = GasParams::new(cfg.gas.gamma, cfg.gas.epsilon)?;
    let w0 = initial_field::<D>(cfg, &grid, &gas)?;
    let dt = match cfg.scheme.dt {
        Some(dt) => dt,
        None => {
            let dt = cfl_time_step(&w0, cfg.scheme.cfl)?;
            // Without non-stiff motion the CFL bound is void; fall back to cfl·Δx.
            if dt.is_finite() {
                dt
            } else {
                cfg.scheme.cfl * grid.dx()
            }
        }
    };
    let reference = match cfg.scheme.reference {
        ReferenceChoice::PreviousStep => ReferenceStrategy::PreviousStep,
        ReferenceChoice::Constant => ReferenceStrategy::Constant(w0.mean_state()?),
    };
    let step_cfg = StepConfig::new(dt)
        .with_solver(cfg.scheme.solver_kind())
        .with_form(cfg.scheme.scheme_form())
        .with_theta4(cfg.scheme.theta4);
    let spectral = SpectralOperator::new(&grid);
    let mut diags: Vec<DiagnosticsReport> = vec![diagnostics(0, &w0, &spectral)];
    let result = run(&w0, &reference, &step_cfg, cfg.n_steps, |n, w, _| {
        diags.push(diagnostics(n, w, &spectral));
        Ok(())
    });

    write_field(&out.join("initial.csv"), &w0)?;
    write_diagnostics(&out.join("diagnostics.csv"), &diags)?;
    let traj = result.with_context(|| format!("run aborted; diagnostics so far in {}", out.display()))?;
    write_field(&out.join("final.csv"), &traj.final_field)?;
    write_steps(&out.join("steps.csv"), &traj.reports)?;

    let mut s = Summary::new("run", cfg)?;
    s.line(format!("dimension = {}", D::DIM));
    s.line(format!("reference = {}", reference_name(cfg.scheme.reference)));
    s.value("dt", dt);
    s.line(format!("steps = {}", traj.reports.len()));
    let worst = traj.reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    s.value("max_residual", worst);
    if let Some(last) = diags.last() {
        s.value("final_rho_fluct", last.rho_fluct);
        s.value("final_p_fluct", last.p_fluct);
        s.value("final_div_u", last.div_u);
        s.value("final_mean_p", last.mean_p);
    }
    s.finish(out)
}

fn write_steps(path: &Path, reports: &[StepReport]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["step", "residual", "iterations", "wall_ms"])?;
    for r in reports {
        w.write_record([
            r.step.to_string(),
            num(r.residual),
            r.iterations.to_string(),
            num(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_diagnostics(path: &Path, rows: &[DiagnosticsReport]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["step", "rho_fluct", "p_fluct", "div_u", "div_u_spectral", "mean_p"])?;
    for r in rows {
        w.write_record([
            r.step.to_string(),
            num(r.rho_fluct),
            num(r.p_fluct),
            num(r.div_u),
            num(r.div_u_spectral),
            num(r.mean_p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_config(cfg: &ExperimentConfig, reference: SweepReference) -> SweepConfig {
    SweepConfig {
        spec: cfg.initial.apply(WellPreparedSpec::default()),
        cells: cfg.cells,
        gamma: cfg.gas.gamma,
        reference,
        dt: cfg.scheme.dt,
        cfl: cfg.scheme.cfl,
        n_steps: cfg.n_steps,
        eps_ladder: cfg.gas.eps_ladder.clone(),
        solver: cfg.scheme.solver.map(|_| cfg.scheme.solver_kind()),
        theta4: cfg.scheme.theta4,
    }
}

pub fn cmd_sweep_eps(cfg: &ExperimentConfig, out: &Path, both: bool) -> Result<bool> {
    if cfg.dimension != 2 {
        bail!("sweep-eps runs on 2D data; set `dimension = 2`");
    }
    prepare_out(out, cfg)?;
    let references = if both {
        vec![SweepReference::PreviousStep, SweepReference::ConstantMean]
    } else {
        vec![match cfg.scheme.reference {
            ReferenceChoice::PreviousStep => SweepReference::PreviousStep,
            ReferenceChoice::Constant => SweepReference::ConstantMean,
        }]
    };
    let mut s = Summary::new("sweep-eps", cfg)?;
    for reference in references {
        let sc = sweep_config(cfg, reference);
        let dt = sc.time_step()?;
        let report = ap_sweep(&sc)?;
        report.write_csv(&out.join(format!("sweep_{}.csv", reference.name())))?;
        s.line(format!("[{}]", report.context));
        s.value("dt", dt);
        for name in ["rho_fluct", "p_fluct", "div_u"] {
            s.check(&format!("{name}_slope"), slope(&report, name)?, 1.75, 2.25);
        }
        let eps_min = sc.eps_ladder.iter().copied().fold(f64::INFINITY, f64::min);
        if let Some(drift) = report.mean_p_drift {
            s.check("mean_p_drift", drift, 0.0, 0.1 * sc.spec.p_mean * eps_min * eps_min);
        }
    }
    s.finish(out)
}

fn slope(report: &HilbertProbeReport, name: &str) -> Result<f64> {
    report
        .slope(name)
        .map(|s| s.slope)
        .with_context(|| format!("{}: no slope for `{name}`", report.context))
}

pub fn cmd_oracle_pl(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    prepare_out(out, cfg)?;
    let base = OracleConfig::default();
    let oc = OracleConfig {
        spec: cfg.initial.apply(base.spec),
        cells: cfg.cells,
        gamma: cfg.gas.gamma,
        reference: ReferencePrimitives {
            rho: cfg.oracle.reference_rho,
            velocity: cfg.oracle.reference_velocity,
            pressure: cfg.oracle.reference_pressure,
        },
        dt: cfg.oracle.dt,
        theta4: cfg.scheme.theta4,
        eps_ladder: cfg.gas.eps_ladder.clone(),
    };
    let report = fourier_pl_oracle(&oc)?;
    report.write_oracle_csv(&out.join("oracle.csv"))?;
    report.write_csv(&out.join("oracle_probe.csv"))?;
    let mut s = Summary::new("oracle-pl", cfg)?;
    s.line(format!("[{}]", report.context));
    s.check("pL_k_nonzero_slope", slope(&report, "pL_k_nonzero")?, 1.9, 2.1);
    s.check("pL_k_zero_slope", slope(&report, "pL_k_zero")?, -0.1, 0.1);
    s.check(
        "compensated_momentum_slope",
        slope(&report, "compensated_momentum")?,
        -0.1,
        f64::INFINITY,
    );
    if let Ok(v) = slope(&report, "omega_symbol") {
        s.value("omega_symbol_slope", v);
    }
    s.finish(out)
}

pub fn cmd_superconsistency(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    prepare_out(out, cfg)?;
    let reference = match cfg.scheme.reference {
        ReferenceChoice::PreviousStep => ProbeReference::PreviousStep,
        ReferenceChoice::Constant => ProbeReference::Constant {
            velocity: cfg.superconsistency.reference_velocity,
        },
    };
    let cc = ConsistencyConfig {
        spec: cfg.initial.apply(WellPreparedSpec::default()),
        cells: cfg.cells,
        gamma: cfg.gas.gamma,
        epsilon: cfg.gas.epsilon,
        dt_ladder: cfg.scheme.dt_ladder.clone(),
        reference,
        theta4: cfg.scheme.theta4,
    };
    let report = superconsistency_probe(&cc)?;
    report.write_csv(&out.join("superconsistency.csv"))?;
    let mut s = Summary::new("superconsistency", cfg)?;
    s.line(format!("[{}]", report.context));
    match (&report.slope, reference) {
        (Some(fit), ProbeReference::PreviousStep) => s.check("linearization_error_slope", fit.slope, 1.7, 2.3),
        (Some(fit), _) => s.value("linearization_error_slope", fit.slope),
        (None, _) => s.line("linearization_error_slope = none (errors vanish)"),
    }
    s.finish(out)
}

pub fn cmd_refine(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    prepare_out(out, cfg)?;
    let rc = RefinementConfig {
        spec: cfg.initial.apply(WellPreparedSpec::default()),
        gamma: cfg.gas.gamma,
        coarse_cells: cfg.refinement.coarse_cells.clone(),
        fine_cells: cfg.refinement.fine_cells,
        eps: cfg.refinement.eps.clone(),
        final_time: cfg.refinement.final_time,
        cfl: cfg.scheme.cfl,
        theta4: cfg.scheme.theta4,
    };
    let report = refinement_study(&rc)?;
    report.write_csv(&out.join("refinement.csv"))?;
    let mut s = Summary::new("refine", cfg)?;
    s.value("dt", report.dt);
    s.line(format!("steps = {}", report.steps));
    for &n in &rc.coarse_cells {
        s.check(&format!("spread_n{n}"), report.spread(n), 1.0, 2.0);
    }
    s.finish(out)
}

pub struct OmegaArgs {
    pub gamma: f64,
    pub dt: f64,
    pub velocity: f64,
    pub rho: f64,
    pub energy: f64,
    pub pressure: f64,
}

pub fn cmd_omega(a: &OmegaArgs) -> Result<String> {
    // ε does not enter the coefficients.
    let gas = GasParams::new(a.gamma, 1.0)?;
    let om = omega_coefficients(&gas, a.dt, a.velocity, a.rho, a.energy, a.pressure)?;
    let mut text = String::new();
    for (i, w) in om.omega.iter().enumerate() {
        writeln!(text, "omega_{i} = {w:.16e}")?;
    }
    Ok(text)
}

fn jacobian_mismatch<D: Dimension>(w: &ConservedState<D>, gas: &GasParams) -> f64 {
    let m = D::VARS;
    let mut worst = 0.0f64;
    for &axis in Axis::up_to(D::DIM) {
        let Ok(jac) = flux_jacobian(w, gas, axis) else {
            return f64::INFINITY;
        };
        let a = jac.matrix().as_ref();
        let scale = a.iter().fold(1.0f64, |s, x| s.max(x.abs()));
        for c in 0..m {
            let h = 1e-6 * w.components()[c].abs().max(1.0);
            let (mut plus, mut minus) = (*w.as_vector(), *w.as_vector());
            plus.as_mut()[c] += h;
            minus.as_mut()[c] -= h;
            let (fp, fm) = (D::flux(&plus, gas, axis), D::flux(&minus, gas, axis));
            for r in 0..m {
                let fd = (fp.as_ref()[r] - fm.as_ref()[r]) / (2.0 * h);
                worst = worst.max((fd - a[r * m + c]).abs() / scale);
            }
        }
    }
    worst
}

fn check_dim<D: Dimension>(rng: &mut ChaCha8Rng, count: usize) -> Result<(usize, f64)> {
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let gas = GasParams::new(rng.random_range(1.05..3.0), rng.random_range(0.01..1.0))?;
        let vel: Vec<f64> = (0..D::DIM).map(|_| rng.random_range(-3.0..3.0)).collect();
        let w =
            ConservedState::<D>::from_primitive(rng.random_range(0.2..5.0), &vel, rng.random_range(0.2..5.0), &gas)?;
        let err = jacobian_mismatch(&w, &gas);
        worst = worst.max(err);
        if err <= 1e-6 {
            passed += 1;
        }
    }
    Ok((passed, worst))
}

/// Returns the printed table and whether every state passed.
pub fn cmd_check_jacobians(seed: u64, count: usize) -> Result<(String, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("dimension,checked,passed,max_rel_err\n");
    let mut ok = true;
    for (name, (passed, worst)) in [
        ("1D", check_dim::<OneD>(&mut rng, count)?),
        ("2D", check_dim::<TwoD>(&mut rng, count)?),
    ] {
        ok &= passed == count;
        writeln!(text, "{name},{count},{passed},{worst:.16e}")?;
    }
    Ok((text, ok))
}

/// `--out`, then `STIFF_EULER_OUT`, then `output` in the config.
pub fn output_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| std::env::var_os("STIFF_EULER_OUT").map(PathBuf::from))
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("stiff-euler-out"))
}
