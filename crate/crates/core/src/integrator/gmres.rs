use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) struct GmresOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Restarted GMRES with right preconditioning, zero initial guess.
///
/// Convergence is judged on the true relative residual `‖b − Ax‖ / ‖b‖`,
/// recomputed at every restart.
pub(crate) fn gmres<A, P>(
    apply: A,
    precondition: P,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    restart: usize,
) -> Result<GmresOutcome>
where
    A: Fn(&[f64]) -> Vec<f64>,
    P: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(GmresOutcome {
            x,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut iterations = 0;
    let mut r = b.to_vec();
    loop {
        let beta = norm(&r);
        let rel = beta / bnorm;
        if rel <= tol {
            return Ok(GmresOutcome {
                x,
                residual: rel,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(Error::NotConverged {
                residual: rel,
                iterations,
            });
        }
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h: Vec<Vec<f64>> = Vec::new();
        let (mut cs, mut sn): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        let mut g = vec![beta];
        let mut zs: Vec<Vec<f64>> = Vec::new();
        for k in 0..restart.min(max_iter - iterations) {
            let z = precondition(&basis[k]);
            let mut w = apply(&z);
            zs.push(z);
            // modified Gram-Schmidt, applied twice for stability
            let mut col = vec![0.0; k + 2];
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let hij = dot(&w, v);
                    col[i] += hij;
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= hij * vi);
                }
            }
            col[k + 1] = norm(&w);
            for i in 0..k {
                let t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            let d = col[k].hypot(col[k + 1]);
            let (c, s) = if d == 0.0 {
                (1.0, 0.0)
            } else {
                (col[k] / d, col[k + 1] / d)
            };
            cs.push(c);
            sn.push(s);
            let hk1 = col[k + 1];
            col[k] = d;
            col[k + 1] = 0.0;
            g.push(-s * g[k]);
            g[k] *= c;
            h.push(col);
            iterations += 1;
            if g[k + 1].abs() / bnorm <= 0.1 * tol || hk1 == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hk1).collect());
        }
        // back substitution for the least-squares coefficients
        let kdim = h.len();
        let mut y = vec![0.0; kdim];
        for i in (0..kdim).rev() {
            let s: f64 = (i + 1..kdim).map(|j| h[j][i] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, z) in y.iter().zip(&zs) {
            x.iter_mut().zip(z).for_each(|(xi, zi)| *xi += yi * zi);
        }
        let ax = apply(&x);
        r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_nonsymmetric_system() {
        // tridiagonal, strongly non-symmetric
        let n = 50;
        let apply = |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let l = if i > 0 { x[i - 1] } else { 0.0 };
                    let r = if i + 1 < n { x[i + 1] } else { 0.0 };
                    3.0 * x[i] - 2.0 * l + 0.5 * r
                })
                .collect()
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let out = gmres(apply, |v: &[f64]| v.to_vec(), &b, 1e-12, 500, 20).unwrap();
        let ax = apply(&out.x);
        let err: f64 = ax.iter().zip(&b).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err <= 1e-11 * norm(&b));
        assert!(out.residual <= 1e-12);
    }

    #[test]
    fn exact_preconditioner_converges_in_one_iteration() {
        let apply = |x: &[f64]| x.iter().map(|v| 4.0 * v).collect::<Vec<_>>();
        let pre = |x: &[f64]| x.iter().map(|v| 0.25 * v).collect::<Vec<_>>();
        let out = gmres(apply, pre, &[1.0, 2.0, 3.0], 1e-12, 10, 5).unwrap();
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn reports_non_convergence() {
        let apply = |x: &[f64]| vec![x[0], 1e-3 * x[1] + x[0]];
        let err = gmres(apply, |v: &[f64]| v.to_vec(), &[1.0, 1.0], 1e-30, 1, 1);
        assert!(matches!(err, Err(Error::NotConverged { .. })));
    }
}
