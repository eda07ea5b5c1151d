use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stiff_euler::grid::DEFAULT_THETA4;
use stiff_euler::integrator::{SchemeForm, SolverKind, StepConfig};
use stiff_euler::lab::{StreamTerm, Trig, WellPreparedSpec, DEFAULT_EPS_LADDER};

/// Experiment description read from a TOML file. Every key is optional.
///
/// Fields of `[initial]` override the data each command starts from: a
/// constant state for `run`, the vortex array for the 2D probes and an
/// entropy wave for `oracle-pl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimension: usize,
    pub cells: usize,
    pub length: f64,
    pub n_steps: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub gas: GasSection,
    pub scheme: SchemeSection,
    pub initial: InitialSection,
    pub oracle: OracleSection,
    pub superconsistency: SuperconsistencySection,
    pub refinement: RefinementSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dimension: 2,
            cells: 64,
            length: 2.0 * PI,
            n_steps: 20,
            seed: 0,
            output: None,
            gas: GasSection::default(),
            scheme: SchemeSection::default(),
            initial: InitialSection::default(),
            oracle: OracleSection::default(),
            superconsistency: SuperconsistencySection::default(),
            refinement: RefinementSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GasSection {
    pub gamma: f64,
    pub epsilon: f64,
    pub eps_ladder: Vec<f64>,
}

impl Default for GasSection {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            epsilon: 1e-3,
            eps_ladder: DEFAULT_EPS_LADDER.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceChoice {
    PreviousStep,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Fourier,
    Gmres,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    Unified,
    Split,
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeSection {
    pub reference: ReferenceChoice,
    /// Fixed step; without it the step follows from the CFL number.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub dt_ladder: Vec<f64>,
    pub cfl: f64,
    /// Defaults to GMRES for the previous-step reference and the Fourier
    /// solver for a constant one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverChoice>,
    pub tol: f64,
    pub max_iter: usize,
    pub theta4: f64,
    pub form: FormChoice,
}

impl Default for SchemeSection {
    fn default() -> Self {
        Self {
            reference: ReferenceChoice::PreviousStep,
            dt: None,
            dt_ladder: vec![0.04, 0.02, 0.01, 0.005],
            cfl: StepConfig::DEFAULT_CFL,
            solver: None,
            tol: SolverKind::DEFAULT_TOL,
            max_iter: SolverKind::DEFAULT_MAX_ITER,
            theta4: DEFAULT_THETA4,
            form: FormChoice::Unified,
        }
    }
}

impl SchemeSection {
    pub fn solver_kind(&self) -> SolverKind {
        let choice = self.solver.unwrap_or(match self.reference {
            ReferenceChoice::PreviousStep => SolverChoice::Gmres,
            ReferenceChoice::Constant => SolverChoice::Fourier,
        });
        match choice {
            SolverChoice::Fourier => SolverKind::FourierExact,
            SolverChoice::Gmres => SolverKind::Iterative {
                tol: self.tol,
                max_iter: self.max_iter,
            },
            SolverChoice::Dense => SolverKind::Dense,
        }
    }

    pub fn scheme_form(&self) -> SchemeForm {
        match self.form {
            FormChoice::Unified => SchemeForm::Unified,
            FormChoice::Split => SchemeForm::Split,
            FormChoice::Homogeneous => SchemeForm::Homogeneous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Constant,
    WellPrepared,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigChoice {
    Sin,
    Cos,
}

/// One term `amplitude · x(kx·x) · y(ky·y)` of the stream function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamTermConfig {
    pub amplitude: f64,
    pub x: TrigChoice,
    pub kx: i64,
    pub y: TrigChoice,
    pub ky: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity_mean: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity_amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<Vec<StreamTermConfig>>,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self {
            kind: InitialKind::Constant,
            path: None,
            rho_mean: None,
            p_mean: None,
            velocity_mean: None,
            velocity_amplitude: None,
            pressure_amplitude: None,
            density_amplitude: None,
            wavenumber: None,
            stream: None,
        }
    }
}

impl InitialSection {
    /// Applies the keys that are present on top of `base`.
    pub fn apply(&self, base: WellPreparedSpec) -> WellPreparedSpec {
        let trig = |t: TrigChoice| match t {
            TrigChoice::Sin => Trig::Sin,
            TrigChoice::Cos => Trig::Cos,
        };
        WellPreparedSpec {
            rho_mean: self.rho_mean.unwrap_or(base.rho_mean),
            p_mean: self.p_mean.unwrap_or(base.p_mean),
            velocity_mean: self.velocity_mean.unwrap_or(base.velocity_mean),
            velocity_amplitude: self.velocity_amplitude.unwrap_or(base.velocity_amplitude),
            pressure_amplitude: self.pressure_amplitude.unwrap_or(base.pressure_amplitude),
            density_amplitude: self.density_amplitude.unwrap_or(base.density_amplitude),
            wavenumber: self.wavenumber.unwrap_or(base.wavenumber),
            stream: match &self.stream {
                Some(terms) => terms
                    .iter()
                    .map(|t| StreamTerm::new(t.amplitude, trig(t.x), t.kx, trig(t.y), t.ky))
                    .collect(),
                None => base.stream,
            },
        }
    }
}

/// Constant reference state of the 1D Fourier oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub dt: f64,
    pub reference_rho: f64,
    pub reference_velocity: f64,
    pub reference_pressure: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        let d = stiff_euler::lab::OracleConfig::default();
        Self {
            dt: d.dt,
            reference_rho: d.reference.rho,
            reference_velocity: d.reference.velocity,
            reference_pressure: d.reference.pressure,
        }
    }
}

/// Velocity of the constant reference used when `scheme.reference = "constant"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuperconsistencySection {
    pub reference_velocity: [f64; 2],
}

impl Default for SuperconsistencySection {
    fn default() -> Self {
        Self {
            reference_velocity: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefinementSection {
    pub coarse_cells: Vec<usize>,
    pub fine_cells: usize,
    pub eps: Vec<f64>,
    pub final_time: f64,
}

impl Default for RefinementSection {
    fn default() -> Self {
        let d = stiff_euler::lab::RefinementConfig::default();
        Self {
            coarse_cells: d.coarse_cells,
            fine_cells: d.fine_cells,
            eps: d.eps,
            final_time: d.final_time,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// SHA-256 of the canonical serialization, as hex.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_toml()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    fn validate(&self) -> Result<()> {
        if self.dimension != 1 && self.dimension != 2 {
            bail!("`dimension` must be 1 or 2, got {}", self.dimension);
        }
        if self.initial.kind == InitialKind::File && self.initial.path.is_none() {
            bail!("`initial.path` is required when `initial.kind = \"file\"`");
        }
        Ok(())
    }
}
