use super::{Axis, ConservedState, Dimension};
use crate::error::Result;
use crate::gas::GasParams;

/// Coefficients of `f′_s(w) = ε⁻² A₋₂ + ε⁻¹ A₋₁ + A₀ + O(ε)` about a
/// leading-order state `(ρ₍₀₎, u₍₀₎, E₍₀₎)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianEpsExpansion<D: Dimension> {
    pub order_m2: D::Matrix,
    pub order_m1: D::Matrix,
    pub order_0: D::Matrix,
}

impl<D: Dimension> JacobianEpsExpansion<D> {
    /// `ε⁻² A₋₂ + ε⁻¹ A₋₁ + A₀` evaluated at a given ε.
    pub fn truncated(&self, epsilon: f64) -> D::Matrix {
        let mut out = D::Matrix::default();
        let (m2, m1, m0) = (self.order_m2.as_ref(), self.order_m1.as_ref(), self.order_0.as_ref());
        for (i, o) in out.as_mut().iter_mut().enumerate() {
            *o = m2[i] / (epsilon * epsilon) + m1[i] / epsilon + m0[i];
        }
        out
    }
}

/// Expansion of the flux Jacobian in powers of ε. The leading-order state is
/// read as `(ρ₍₀₎, ρ₍₀₎u₍₀₎, E₍₀₎)`; the ε carried by `gas` is not used.
pub fn jacobian_eps_expansion<D: Dimension>(
    leading: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<JacobianEpsExpansion<D>> {
    axis.check::<D>()?;
    let (order_m2, order_0) = D::jacobian_orders(leading.as_vector(), gas, axis);
    Ok(JacobianEpsExpansion {
        order_m2,
        order_m1: D::Matrix::default(),
        order_0,
    })
}
