//! Numerical checks of the low Mach asymptotics of the scheme.
//!
//! Well-prepared initial data, the linearized pressure `p_L` and the θ
//! operator, the ω coefficients of the Fourier-space pressure relation, and
//! probes that measure ε- and Δt-scaling on ladders of runs.

mod consistency;
mod diagnostics;
mod fit;
mod omega;
mod oracle;
mod pressure;
mod refinement;
mod report;
mod sweep;
mod well_prepared;

pub use consistency::{
    linearization_errors, superconsistency_probe, ConsistencyConfig, ConsistencyReport, ConsistencyRow, ProbeReference,
};
pub use diagnostics::{diagnostics, DiagnosticsReport};
pub use fit::{check_ladder, fit_loglog, SlopeFit, MIN_FIT_POINTS};
pub use omega::{
    omega_coefficients, omega_from_gamma, real_roots, simultaneous_zero_polynomial, simultaneous_zero_roots,
    OmegaCoefficients,
};
pub use oracle::{fourier_pl_oracle, OracleConfig, ReferencePrimitives};
pub use pressure::{
    linearized_pressure, linearized_pressure_values, LinearizedPressureField, ThetaOperator, ThetaSymbol,
};
pub use refinement::{inject, refinement_study, RefinementConfig, RefinementReport, RefinementRow};
pub use report::{HilbertProbeReport, OracleRow, ProbeRow};
pub use sweep::{ap_sweep, sweep_point, SweepConfig, SweepReference};
pub use well_prepared::{incompressible_fields, make_well_prepared, StreamTerm, Trig, WellPreparedSpec};

/// Geometric ladder with ratio √10 spanning two decades.
pub const DEFAULT_EPS_LADDER: [f64; 5] = [1e-1, 3.16e-2, 1e-2, 3.16e-3, 1e-3];
