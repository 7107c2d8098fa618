use std::io::{Read, Write};

use crate::error::{QError, Result};
use crate::linalg::Matrix;
use crate::qcore::{GridFunction, GridWindow};
use crate::scalar::Scalar;
use crate::uncertainty::ConcentrationReport;

/// Seventeen significant digits, enough to read every value back bit for bit.
pub fn fmt_num<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN))
}

fn io_err(e: impl std::fmt::Display) -> QError {
    QError::Input(e.to_string())
}

/// Writes `k,q^k,value` rows for every exponent of the window, `k` descending.
pub fn write_grid_csv<T: Scalar, W: Write>(f: &GridFunction<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "q^k", "value"]).map_err(io_err)?;
    for k in f.window().exponents().rev() {
        w.write_record([k.to_string(), fmt_num(f.point(k)), fmt_num(f.get(k))])
            .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Reads the format of [`write_grid_csv`]; rows may come in any order.
///
/// Without an explicit `q` the base is recovered from the `q^k` column of a row with `k ≠ 0`.
pub fn read_grid_csv<T: Scalar, R: Read>(input: R, q: Option<T>) -> Result<GridFunction<T>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows: Vec<(i32, T, T)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(io_err)?;
        if rec.len() != 3 {
            return Err(QError::Input(format!(
                "expected 3 columns, found {}",
                rec.len()
            )));
        }
        let k: i32 = rec[0].trim().parse().map_err(io_err)?;
        let x: f64 = rec[1].trim().parse().map_err(io_err)?;
        let v: f64 = rec[2].trim().parse().map_err(io_err)?;
        let cast = |z: f64| {
            T::from_f64(z).ok_or_else(|| QError::Input(format!("{z} is not representable")))
        };
        rows.push((k, cast(x)?, cast(v)?));
    }
    if rows.is_empty() {
        return Err(QError::Input("grid CSV has no rows".into()));
    }
    let q = match q {
        Some(q) => q,
        None => {
            let &(k, x, _) = rows
                .iter()
                .find(|r| r.0 != 0)
                .ok_or_else(|| QError::Input("cannot infer q from a single k = 0 row".into()))?;
            x.powf(T::one() / T::from_i32(k).expect("small integer"))
        }
    };
    for &(k, x, _) in &rows {
        let expected = q.powi(k);
        if (x - expected).abs() > T::from_f64(1e-12).unwrap() * expected {
            return Err(QError::Input(format!(
                "q^k column {x} at k = {k} is inconsistent with q = {q}"
            )));
        }
    }
    let k_min = rows.iter().map(|r| r.0).min().unwrap();
    let k_max = rows.iter().map(|r| r.0).max().unwrap();
    let mut f = GridFunction::zeros(q, GridWindow::new(k_min, k_max)?)?;
    for (k, _, v) in rows {
        f.set(k, v)?;
    }
    Ok(f)
}

/// Matrix with a header row naming its columns.
pub fn write_matrix_csv<T: Scalar, W: Write>(m: &Matrix<T>, header: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header.iter().map(|&h| fmt_num(h)))
        .map_err(io_err)?;
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|&v| fmt_num(v)))
            .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_sweep_csv<T: Scalar, W: Write>(
    reports: &[ConcentrationReport<T>],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n_T",
        "n_Omega",
        "eps_T",
        "eps_Omega",
        "lhs",
        "rhs",
        "satisfied",
        "vacuous",
        "rhs_proof",
        "printed_direction_holds",
        "kernel_norm",
        "de_jeu_slack",
    ])
    .map_err(io_err)?;
    for r in reports {
        w.write_record([
            r.n_t.to_string(),
            r.n_omega.to_string(),
            fmt_num(r.eps_t),
            fmt_num(r.eps_omega),
            r.lhs.to_string(),
            fmt_num(r.rhs),
            r.satisfied.to_string(),
            r.vacuous.to_string(),
            fmt_num(r.rhs_proof),
            r.printed_direction_holds.to_string(),
            fmt_num(r.kernel_norm),
            fmt_num(r.de_jeu_slack),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn to_json<S: serde::Serialize>(value: &S) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(io_err)
}
