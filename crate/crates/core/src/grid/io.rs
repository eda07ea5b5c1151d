use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{ConservedField, PeriodicGrid};
use crate::error::{Error, Result};
use crate::euler::Dimension;
use crate::gas::GasParams;

fn header<D: Dimension>() -> Vec<&'static str> {
    if D::DIM == 1 {
        vec!["x", "rho", "mom_x", "energy"]
    } else {
        vec!["x", "y", "rho", "mom_x", "mom_y", "energy"]
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write a field as CSV with columns `x[,y],rho,mom_x[,mom_y],energy`,
/// one row per cell in flat-index order.
pub fn write_field<D: Dimension>(path: &Path, field: &ConservedField<D>) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let grid = field.grid();
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{}", header::<D>().join(","))?;
        for (j, w) in field.data().iter().enumerate() {
            let p = grid.point(j);
            let mut row: Vec<String> = p[..D::DIM].iter().map(|x| format!("{x:.16e}")).collect();
            row.extend(w.as_ref().iter().map(|x| format!("{x:.16e}")));
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_err(path))
}

/// Read a field written by [`write_field`]. Rows must cover `grid` in
/// flat-index order with matching coordinates.
pub fn read_field<D: Dimension>(path: &Path, grid: &PeriodicGrid, gas: &GasParams) -> Result<ConservedField<D>> {
    if grid.dim() != D::DIM {
        return Err(Error::DimensionMismatch {
            expected: D::DIM,
            found: grid.dim(),
        });
    }
    let parse = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let expected = header::<D>();
    let found = reader.headers().map_err(|e| parse(1, e.to_string()))?.clone();
    for (i, name) in expected.iter().enumerate() {
        match found.get(i) {
            Some(f) if f == *name => {}
            Some(f) => return Err(parse(1, format!("column {} should be `{name}`, found `{f}`", i + 1))),
            None => return Err(parse(1, format!("missing column `{name}`"))),
        }
    }
    if found.len() > expected.len() {
        return Err(parse(1, format!("unexpected column `{}`", &found[expected.len()])));
    }
    let tol = 1e-9 * grid.length();
    let mut data = Vec::with_capacity(grid.num_cells());
    for (j, record) in reader.records().enumerate() {
        let line = j as u64 + 2;
        let record = record.map_err(|e| parse(line, e.to_string()))?;
        if j >= grid.num_cells() {
            return Err(parse(
                line,
                format!("more rows than the {} grid cells", grid.num_cells()),
            ));
        }
        let mut values = Vec::with_capacity(expected.len());
        for (i, name) in expected.iter().enumerate() {
            let v: f64 = record[i]
                .parse()
                .map_err(|_| parse(line, format!("column `{name}`: cannot parse `{}`", &record[i])))?;
            values.push(v);
        }
        let p = grid.point(j);
        for (a, name) in expected[..D::DIM].iter().enumerate() {
            if (values[a] - p[a]).abs() > tol {
                return Err(parse(
                    line,
                    format!("column `{name}` = {} does not match grid point {}", values[a], p[a]),
                ));
            }
        }
        let mut w = D::Vector::default();
        w.as_mut().copy_from_slice(&values[D::DIM..]);
        data.push(w);
    }
    if data.len() != grid.num_cells() {
        return Err(parse(
            data.len() as u64 + 1,
            format!("expected {} rows, found {}", grid.num_cells(), data.len()),
        ));
    }
    ConservedField::from_raw_checked(*grid, *gas, data).map_err(|(cell, reason)| parse(cell as u64 + 2, reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{ConservedState, OneD, TwoD};

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        let g = PeriodicGrid::standard(2, 8).unwrap();
        let gas = GasParams::new(1.4, 0.05).unwrap();
        let data: Vec<[f64; 4]> = (0..g.num_cells())
            .map(|j| {
                let [x, y] = g.point(j);
                let s = ConservedState::<TwoD>::from_primitive(
                    1.0 + 0.1 * x.sin(),
                    &[y.cos(), 0.3],
                    1.0 + 0.01 * x.cos(),
                    &gas,
                )
                .unwrap();
                *s.as_vector()
            })
            .collect();
        let f = ConservedField::<TwoD>::new(g, gas, data).unwrap();
        write_field(&path, &f).unwrap();
        let back = read_field::<TwoD>(&path, &g, &gas).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn wrong_header_names_the_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        std::fs::write(&path, "x,density,mom_x,energy\n").unwrap();
        let g = PeriodicGrid::standard(1, 8).unwrap();
        let gas = GasParams::new(1.4, 0.5).unwrap();
        let err = read_field::<OneD>(&path, &g, &gas).unwrap_err().to_string();
        assert!(err.contains("`rho`"), "{err}");
    }

    #[test]
    fn missing_file_names_the_path() {
        let g = PeriodicGrid::standard(1, 8).unwrap();
        let gas = GasParams::new(1.4, 0.5).unwrap();
        let err = read_field::<OneD>(Path::new("/nonexistent/w.csv"), &g, &gas)
            .unwrap_err()
            .to_string();
        assert!(err.contains("/nonexistent/w.csv"), "{err}");
    }
}
