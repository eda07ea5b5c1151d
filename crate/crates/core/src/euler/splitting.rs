use super::{mat_vec, vec_add, vec_sub, Axis, ConservedState, Dimension};
use crate::error::Result;
use crate::gas::GasParams;

/// Stiff flux `f̃(w; w_R) = f(w_R) + f′(w_R)(w − w_R)`, affine in `w`.
pub fn stiff_flux<D: Dimension>(
    w: &ConservedState<D>,
    reference: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<D::Vector> {
    axis.check::<D>()?;
    Ok(stiff_flux_raw::<D>(w.as_vector(), reference.as_vector(), gas, axis))
}

/// Non-stiff remainder `f̂(w; w_R) = f(w) − f̃(w; w_R)`.
pub fn nonstiff_flux<D: Dimension>(
    w: &ConservedState<D>,
    reference: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<D::Vector> {
    axis.check::<D>()?;
    Ok(nonstiff_flux_raw::<D>(w.as_vector(), reference.as_vector(), gas, axis))
}

pub(crate) fn stiff_flux_raw<D: Dimension>(
    w: &D::Vector,
    reference: &D::Vector,
    gas: &GasParams,
    axis: Axis,
) -> D::Vector {
    let jac = D::jacobian(reference, gas, axis);
    vec_add::<D>(
        &D::flux(reference, gas, axis),
        &mat_vec::<D>(&jac, &vec_sub::<D>(w, reference)),
    )
}

pub(crate) fn nonstiff_flux_raw<D: Dimension>(
    w: &D::Vector,
    reference: &D::Vector,
    gas: &GasParams,
    axis: Axis,
) -> D::Vector {
    vec_sub::<D>(&D::flux(w, gas, axis), &stiff_flux_raw::<D>(w, reference, gas, axis))
}
