use proptest::prelude::*;
use stiff_euler::euler::nonstiff_flux;
use stiff_euler::grid::{
    explicit_divergence, max_nonstiff_speed, nonstiff_numerical_flux, nonstiff_wave_speed, read_field, write_field,
    FrozenReference, ImplicitDivergence, SpectralOperator, DEFAULT_THETA4,
};
use stiff_euler::{Axis, ConservedField, ConservedState, Dimension, GasParams, OneD, PeriodicGrid, TwoD, VectorField};

type Cell = (f64, f64, f64, f64);

fn cell() -> impl Strategy<Value = Cell> {
    (0.5f64..2.0, -1.0f64..1.0, -1.0f64..1.0, 0.5f64..2.0)
}

fn field<D: Dimension>(n: usize, eps: f64, cells: &[Cell]) -> ConservedField<D> {
    let grid = PeriodicGrid::standard(D::DIM, n).unwrap();
    let gas = GasParams::new(1.4, eps).unwrap();
    let rho: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let mut vel = vec![cells.iter().map(|c| c.1).collect::<Vec<_>>()];
    if D::DIM == 2 {
        vel.push(cells.iter().map(|c| c.2).collect());
    }
    let p: Vec<f64> = cells.iter().map(|c| c.3).collect();
    ConservedField::from_primitive(grid, gas, &rho, &vel, &p).unwrap()
}

fn check_conservation<D: Dimension>(w: &ConservedField<D>) -> Result<(), TestCaseError> {
    let refs = [
        FrozenReference::per_cell(w),
        FrozenReference::uniform(&w.mean_state().unwrap()),
    ];
    for r in &refs {
        let div = explicit_divergence(w, r);
        check_zero_sum(&div)?;
        let imp = ImplicitDivergence::new(w.grid(), w.gas(), r, DEFAULT_THETA4).unwrap();
        check_zero_sum(&imp.apply(&w.to_vector_field()))?;
    }
    Ok(())
}

fn check_zero_sum<D: Dimension>(v: &VectorField<D>) -> Result<(), TestCaseError> {
    let m = D::VARS;
    for c in 0..m {
        let comp = v.component(c);
        let total: f64 = comp.iter().sum();
        let norm: f64 = comp.iter().map(|x| x.abs()).sum();
        prop_assert!(total.abs() <= 1e-12 * norm.max(1.0), "component {c}: {total} vs {norm}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divergences_telescope_in_one_d(cells in prop::collection::vec(cell(), 16), eps in 0.01f64..1.0) {
        check_conservation(&field::<OneD>(16, eps, &cells))?;
    }

    #[test]
    fn divergences_telescope_in_two_d(cells in prop::collection::vec(cell(), 64), eps in 0.01f64..1.0) {
        check_conservation(&field::<TwoD>(8, eps, &cells))?;
    }

    #[test]
    fn rusanov_flux_is_consistent(w in cell(), r in cell(), eps in 0.01f64..1.0) {
        let gas = GasParams::new(1.4, eps).unwrap();
        let w = ConservedState::<TwoD>::from_primitive(w.0, &[w.1, w.2], w.3, &gas).unwrap();
        let r = ConservedState::<TwoD>::from_primitive(r.0, &[r.1, r.2], r.3, &gas).unwrap();
        for axis in Axis::ALL {
            let num = nonstiff_numerical_flux(&w, &w, &r, &gas, axis).unwrap();
            prop_assert_eq!(num, nonstiff_flux(&w, &r, &gas, axis).unwrap());
        }
    }

    #[test]
    fn rusanov_flux_is_lipschitz(
        l in cell(), rr in cell(), r in cell(), dir in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        eps in 0.01f64..1.0,
    ) {
        let gas = GasParams::new(1.4, eps).unwrap();
        let mk = |c: Cell| ConservedState::<TwoD>::from_primitive(c.0, &[c.1, c.2], c.3, &gas).unwrap();
        let (wl, wr, wref) = (mk(l), mk(rr), mk(r));
        let d = [dir.0, dir.1, dir.2, dir.3];
        let bump = |w: &ConservedState<TwoD>, h: f64| {
            let mut v = *w.as_vector();
            v.iter_mut().zip(&d).for_each(|(x, dx)| *x += h * dx);
            ConservedState::<TwoD>::from_vector(v, &gas).unwrap()
        };
        let dnorm = d.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-3);
        let diff = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        for axis in Axis::ALL {
            let base = nonstiff_numerical_flux(&wl, &wr, &wref, &gas, axis).unwrap();
            // Bound from the non-stiff Jacobians at both sides plus the dissipation speed.
            let speed = |w: &ConservedState<TwoD>| nonstiff_wave_speed(w, &wref, &gas, axis).unwrap();
            let jump = diff(wr.as_vector(), wl.as_vector());
            let bound = 10.0 * (1.0 + speed(&wl) + speed(&wr)) * (1.0 + jump);
            for h in [1e-3, 1e-5] {
                let left = nonstiff_numerical_flux(&bump(&wl, h), &wr, &wref, &gas, axis).unwrap();
                let right = nonstiff_numerical_flux(&wl, &bump(&wr, h), &wref, &gas, axis).unwrap();
                prop_assert!(diff(&left, &base) / (h * dnorm) <= bound);
                prop_assert!(diff(&right, &base) / (h * dnorm) <= bound);
            }
        }
    }

    #[test]
    fn spectral_derivative_is_exact_on_resolved_modes(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 15),
    ) {
        let grid = PeriodicGrid::standard(1, 32).unwrap();
        let op = SpectralOperator::new(&grid);
        let xs: Vec<f64> = (0..32).map(|j| grid.coordinate(j)).collect();
        let f: Vec<f64> = xs.iter().map(|&x| {
            coeffs.iter().enumerate().map(|(k, (a, b))| {
                let k = (k + 1) as f64;
                a * (k * x).sin() + b * (k * x).cos()
            }).sum()
        }).collect();
        let df = op.derivative(&f, Axis::X);
        for (j, &x) in xs.iter().enumerate() {
            let exact: f64 = coeffs.iter().enumerate().map(|(k, (a, b))| {
                let k = (k + 1) as f64;
                k * (a * (k * x).cos() - b * (k * x).sin())
            }).sum();
            prop_assert!((df[j] - exact).abs() <= 1e-12, "{} vs {}", df[j], exact);
        }
    }
}

#[test]
fn nonstiff_speed_stays_bounded_on_well_prepared_states() {
    let n = 32;
    let grid = PeriodicGrid::standard(2, n).unwrap();
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let gas = GasParams::new(1.4, eps).unwrap();
        let e2 = eps * eps;
        let pts: Vec<[f64; 2]> = (0..grid.num_cells()).map(|i| grid.point(i)).collect();
        let rho: Vec<f64> = pts.iter().map(|[x, y]| 1.0 + e2 * (x + y).sin()).collect();
        let u: Vec<f64> = pts.iter().map(|[x, y]| x.sin() * y.cos()).collect();
        let v: Vec<f64> = pts.iter().map(|[x, y]| -x.cos() * y.sin()).collect();
        let p: Vec<f64> = pts.iter().map(|[x, y]| 1.0 + e2 * (x - y).cos()).collect();
        let max_u = u.iter().chain(&v).fold(0.0f64, |m, x| m.max(x.abs()));
        let w = ConservedField::<TwoD>::from_primitive(grid, gas, &rho, &[u, v], &p).unwrap();
        let speed = max_nonstiff_speed(&w, &w.mean_state().unwrap());
        assert!(speed <= 10.0 * max_u + 1.0, "eps {eps}: {speed}");
    }
}

#[test]
fn two_d_csv_has_one_row_per_cell() {
    // The smallest admissible grid is 8 × 8.
    let cells: Vec<Cell> = (0..64).map(|i| (1.0 + 0.01 * i as f64, 0.1, -0.2, 1.0)).collect();
    let w = field::<TwoD>(8, 0.1, &cells);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.csv");
    write_field(&path, &w).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "x,y,rho,mom_x,mom_y,energy");
    let back = read_field::<TwoD>(&path, w.grid(), w.gas()).unwrap();
    assert_eq!(back.data(), w.data());
}
