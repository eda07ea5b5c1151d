use std::path::Path;

use super::fit::SlopeFit;
use crate::error::{Error, Result};

/// Per-ε fluctuation norms of a probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub norm_rho_fluct: f64,
    pub norm_p_fluct: f64,
    pub norm_divu: f64,
    pub norm_pl_fluct: f64,
    /// `max_n |mean pⁿ − mean p⁰|`.
    pub mean_p_drift: f64,
}

/// Per-ε quantities of the linearized pressure oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub epsilon: f64,
    /// `|p̂_L(0)|`.
    pub pl_mode_zero: f64,
    /// `max_{k≠0} |p̂_L(k)|`.
    pub pl_mode_nonzero_max: f64,
    /// `‖δ(ρu) + (Δt/ε²) θ⁻¹ ∂ₓ p_L‖∞`.
    pub compensated_momentum: f64,
    /// `max_k |ε⁻² (ε²ω₀ + ε²ikω₁ − ω₂k² − ω₃ik³) p̂_L(k)|`.
    pub omega_symbol_max: f64,
}

/// Results of an ε ladder, sorted by decreasing ε.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertProbeReport {
    pub context: String,
    pub rows: Vec<ProbeRow>,
    pub slopes: Vec<SlopeFit>,
    /// Filled by the oracle only.
    pub oracle: Vec<OracleRow>,
    /// Mean-pressure drift at the smallest ε, for time-dependent sweeps.
    pub mean_p_drift: Option<f64>,
}

impl HilbertProbeReport {
    pub fn slope(&self, quantity: &str) -> Option<&SlopeFit> {
        self.slopes.iter().find(|s| s.quantity == quantity)
    }

    /// Measured size of the order-`k` fluctuation coefficient of a quantity,
    /// `C` in `‖q − mean q‖ ≈ C εᵏ`, with `k` the fitted slope.
    pub fn fluctuation_coefficient(&self, quantity: &str) -> Option<f64> {
        self.slope(quantity).map(SlopeFit::coefficient)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = writer(path)?;
        let run = |w: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
            w.write_record([
                "epsilon",
                "norm_rho_fluct",
                "norm_p_fluct",
                "norm_divu",
                "norm_pL_fluct",
                "slope_fit_context",
            ])?;
            for r in &self.rows {
                let mut rec = fmt_all(&[
                    r.epsilon,
                    r.norm_rho_fluct,
                    r.norm_p_fluct,
                    r.norm_divu,
                    r.norm_pl_fluct,
                ]);
                rec.push(self.context.clone());
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        };
        run(&mut w).map_err(|e| csv_error(path, e))
    }

    pub fn write_oracle_csv(&self, path: &Path) -> Result<()> {
        let mut w = writer(path)?;
        let run = |w: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
            w.write_record([
                "epsilon",
                "pL_k_zero",
                "pL_k_nonzero_max",
                "compensated_momentum",
                "omega_symbol_max",
            ])?;
            for r in &self.oracle {
                w.write_record(fmt_all(&[
                    r.epsilon,
                    r.pl_mode_zero,
                    r.pl_mode_nonzero_max,
                    r.compensated_momentum,
                    r.omega_symbol_max,
                ]))?;
            }
            w.flush()?;
            Ok(())
        };
        run(&mut w).map_err(|e| csv_error(path, e))
    }
}

pub(crate) fn fmt_all(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| format!("{v:.16e}")).collect()
}

pub(crate) fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    }
}
