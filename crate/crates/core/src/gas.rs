use crate::error::{Error, Result};

/// Adiabatic exponent γ and reference Mach number ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    gamma: f64,
    epsilon: f64,
}

impl GasParams {
    pub fn new(gamma: f64, epsilon: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "adiabatic exponent must be finite and > 1",
            });
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "reference Mach number must lie in (0, 1]",
            });
        }
        Ok(Self { gamma, epsilon })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.gamma, epsilon)
    }

    pub(crate) fn eps2(&self) -> f64 {
        self.epsilon * self.epsilon
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_gamma_one() {
        let err = GasParams::new(1.0, 0.5).unwrap_err();
        assert!(err.to_string().contains("gamma"));
    }

    #[test]
    fn rejects_epsilon_out_of_range() {
        assert!(GasParams::new(1.4, 0.0).is_err());
        assert!(GasParams::new(1.4, 1.5).is_err());
        assert!(GasParams::new(1.4, 1.0).is_ok());
    }
}
