use crate::error::{Error, Result};

/// Fewest points accepted for a slope fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Least-squares fit `log y = slope·log x + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub quantity: String,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
    pub points: usize,
}

impl SlopeFit {
    /// Amplitude `C` in `y ≈ C·x^slope`.
    pub fn coefficient(&self) -> f64 {
        self.intercept.exp()
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.slope >= lo && self.slope <= hi
    }
}

/// Ladders must hold at least [`MIN_FIT_POINTS`] positive, strictly
/// decreasing values.
pub fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < MIN_FIT_POINTS {
        return Err(Error::LadderTooShort {
            needed: MIN_FIT_POINTS,
            found: ladder.len(),
        });
    }
    if ladder.iter().any(|x| !(*x > 0.0 && x.is_finite())) || ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::LadderNotDecreasing);
    }
    Ok(())
}

pub fn fit_loglog(quantity: &str, x: &[f64], y: &[f64]) -> Result<SlopeFit> {
    check_ladder(x)?;
    let degenerate = |reason: String| Error::DegenerateFit {
        quantity: quantity.to_string(),
        reason,
    };
    if x.len() != y.len() {
        return Err(degenerate(format!("{} abscissae but {} values", x.len(), y.len())));
    }
    if let Some(bad) = y.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(degenerate(format!("value {bad} is not positive and finite")));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(SlopeFit {
        quantity: quantity.to_string(),
        slope,
        intercept,
        residual,
        points: x.len(),
    })
}
