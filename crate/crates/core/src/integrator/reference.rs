use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::euler::{ConservedState, Dimension};
use crate::grid::{ConservedField, FrozenReference};

/// Supplies the sampled reference field for step `n` at time `tⁿ`.
pub type ReferenceProvider<D> = Arc<dyn Fn(usize, f64) -> Result<ConservedField<D>> + Send + Sync>;

/// How the reference state `w_R` is produced at the start of each step.
pub enum ReferenceStrategy<D: Dimension> {
    /// `w_R = wⁿ`, the classical linearly implicit scheme.
    PreviousStep,
    /// One state for all cells and steps; enables the Fourier-exact solver.
    Constant(ConservedState<D>),
    /// A field supplied from outside, frozen over `[tⁿ, tⁿ⁺¹)`.
    Sampled(ReferenceProvider<D>),
}

impl<D: Dimension> Clone for ReferenceStrategy<D> {
    fn clone(&self) -> Self {
        match self {
            Self::PreviousStep => Self::PreviousStep,
            Self::Constant(s) => Self::Constant(*s),
            Self::Sampled(p) => Self::Sampled(Arc::clone(p)),
        }
    }
}

impl<D: Dimension> fmt::Debug for ReferenceStrategy<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PreviousStep => f.write_str("PreviousStep"),
            Self::Constant(s) => f.debug_tuple("Constant").field(s).finish(),
            Self::Sampled(_) => f.write_str("Sampled(..)"),
        }
    }
}

impl<D: Dimension> ReferenceStrategy<D> {
    pub fn sampled<F>(provider: F) -> Self
    where
        F: Fn(usize, f64) -> Result<ConservedField<D>> + Send + Sync + 'static,
    {
        Self::Sampled(Arc::new(provider))
    }

    pub fn is_previous_step(&self) -> bool {
        matches!(self, Self::PreviousStep)
    }

    /// Reference for step `n` starting at time `t` from the field `w_n`.
    pub fn resolve(&self, n: usize, t: f64, w_n: &ConservedField<D>) -> Result<FrozenReference<D>> {
        match self {
            Self::PreviousStep => Ok(FrozenReference::per_cell(w_n)),
            Self::Constant(s) => Ok(FrozenReference::uniform(s)),
            Self::Sampled(p) => {
                let field = p(n, t)?;
                if field.grid() != w_n.grid() {
                    return Err(Error::InvalidGrid(format!(
                        "sampled reference at step {n} lives on a different grid"
                    )));
                }
                Ok(FrozenReference::per_cell(&field))
            }
        }
    }
}
