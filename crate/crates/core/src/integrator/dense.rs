use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest system the dense solver will assemble.
pub(crate) const DENSE_LIMIT: usize = 4096;

/// Assembles the matrix of `apply` column by column and solves by LU.
pub(crate) fn dense_solve<A>(apply: A, b: &[f64]) -> Result<Vec<f64>>
where
    A: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    if n > DENSE_LIMIT {
        return Err(Error::Unsupported(format!(
            "dense solve limited to {DENSE_LIMIT} unknowns, system has {n}"
        )));
    }
    let mut mat = DMatrix::<f64>::zeros(n, n);
    let mut e = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        let col = apply(&e);
        e[c] = 0.0;
        mat.set_column(c, &DVector::from_vec(col));
    }
    mat.lu()
        .solve(&DVector::from_column_slice(b))
        .map(|x| x.as_slice().to_vec())
        .ok_or(Error::SingularBlock {
            wavenumber: [0, 0],
            condition: f64::INFINITY,
        })
}
