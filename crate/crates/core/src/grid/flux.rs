use rayon::prelude::*;

use super::{implicit::central_divergence, ConservedField, FrozenReference, VectorField};
use crate::error::Result;
use crate::euler::splitting::{nonstiff_flux_raw, stiff_flux_raw};
use crate::euler::{mat_sub, Axis, ConservedState, Dimension};
use crate::gas::GasParams;

pub(crate) fn nonstiff_speed_raw<D: Dimension>(
    w: &D::Vector,
    reference: &D::Vector,
    gas: &GasParams,
    axis: Axis,
) -> f64 {
    if w == reference {
        return 0.0;
    }
    let diff = mat_sub::<D>(&D::jacobian(w, gas, axis), &D::jacobian(reference, gas, axis));
    D::spectral_radius(&diff)
}

/// Spectral radius of the non-stiff Jacobian `f′(w) − f′(w_ref)`.
pub fn nonstiff_wave_speed<D: Dimension>(
    w: &ConservedState<D>,
    reference: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<f64> {
    axis.check::<D>()?;
    Ok(nonstiff_speed_raw::<D>(w.as_vector(), reference.as_vector(), gas, axis))
}

fn rusanov<D: Dimension>(
    left: &D::Vector,
    right: &D::Vector,
    flux_left: &D::Vector,
    flux_right: &D::Vector,
    speed: f64,
) -> D::Vector {
    let mut out = D::Vector::default();
    let (l, r, fl, fr) = (left.as_ref(), right.as_ref(), flux_left.as_ref(), flux_right.as_ref());
    for (c, o) in out.as_mut().iter_mut().enumerate() {
        *o = 0.5 * (fl[c] + fr[c]) - 0.5 * speed * (r[c] - l[c]);
    }
    out
}

/// Rusanov flux of `f̂(·; w_ref)` between two states sharing one reference:
/// `½(f̂(w_L) + f̂(w_R)) − ½λ̂(w_R − w_L)` with `λ̂` the larger non-stiff
/// spectral radius of the two sides.
pub fn nonstiff_numerical_flux<D: Dimension>(
    left: &ConservedState<D>,
    right: &ConservedState<D>,
    reference: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<D::Vector> {
    nonstiff_interface_flux(left, right, reference, reference, gas, axis)
}

/// Rusanov flux of `f̂` where each side is split about its own reference.
pub fn nonstiff_interface_flux<D: Dimension>(
    left: &ConservedState<D>,
    right: &ConservedState<D>,
    ref_left: &ConservedState<D>,
    ref_right: &ConservedState<D>,
    gas: &GasParams,
    axis: Axis,
) -> Result<D::Vector> {
    axis.check::<D>()?;
    let (l, r) = (left.as_vector(), right.as_vector());
    let (rl, rr) = (ref_left.as_vector(), ref_right.as_vector());
    let speed = nonstiff_speed_raw::<D>(l, rl, gas, axis).max(nonstiff_speed_raw::<D>(r, rr, gas, axis));
    Ok(rusanov::<D>(
        l,
        r,
        &nonstiff_flux_raw::<D>(l, rl, gas, axis),
        &nonstiff_flux_raw::<D>(r, rr, gas, axis),
        speed,
    ))
}

/// Flux-difference divergence of the Rusanov fluxes of `f̂(wⁿ; w_R)`.
pub(crate) fn rusanov_divergence<D: Dimension>(
    w: &ConservedField<D>,
    reference: &FrozenReference<D>,
) -> VectorField<D> {
    let grid = *w.grid();
    let gas = *w.gas();
    let n = grid.num_cells();
    let data = w.data();
    let dx = grid.dx();
    let mut out = VectorField::<D>::zeros(grid);
    for &axis in grid.axes() {
        let (fhat, speed): (Vec<D::Vector>, Vec<f64>) = (0..n)
            .into_par_iter()
            .map(|j| {
                let r = reference.at(j);
                (
                    nonstiff_flux_raw::<D>(&data[j], r, &gas, axis),
                    nonstiff_speed_raw::<D>(&data[j], r, &gas, axis),
                )
            })
            .unzip();
        // interface j+½ lives between j and its right neighbour
        let interface: Vec<D::Vector> = (0..n)
            .into_par_iter()
            .map(|j| {
                let k = grid.neighbor(j, axis, 1);
                rusanov::<D>(&data[j], &data[k], &fhat[j], &fhat[k], speed[j].max(speed[k]))
            })
            .collect();
        for (j, o) in out.data_mut().iter_mut().enumerate() {
            let left = &interface[grid.neighbor(j, axis, -1)];
            let right = &interface[j];
            for (c, x) in o.as_mut().iter_mut().enumerate() {
                *x += (right.as_ref()[c] - left.as_ref()[c]) / dx;
            }
        }
    }
    out
}

/// Explicit divergence `D_exp[wⁿ]`: Rusanov on `f̂(wⁿ; w_R)` plus the central
/// divergence of the frozen linear part `f̃(wⁿ; w_R)`.
pub fn explicit_divergence<D: Dimension>(w: &ConservedField<D>, reference: &FrozenReference<D>) -> VectorField<D> {
    let gas = *w.gas();
    let data = w.data();
    let mut out = rusanov_divergence(w, reference);
    let linear = central_divergence::<D, _>(w.grid(), |j, axis| {
        stiff_flux_raw::<D>(&data[j], reference.at(j), &gas, axis)
    });
    for (o, l) in out.flat_mut().iter_mut().zip(linear.flat()) {
        *o += l;
    }
    out
}

/// Largest non-stiff wave speed of a field about a fixed reference state,
/// over all cells and axes.
pub fn max_nonstiff_speed<D: Dimension>(w: &ConservedField<D>, reference: &ConservedState<D>) -> f64 {
    let gas = *w.gas();
    let r = reference.as_vector();
    let axes = w.grid().axes();
    w.data()
        .par_iter()
        .map(|x| {
            axes.iter()
                .map(|&a| nonstiff_speed_raw::<D>(x, r, &gas, a))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}
