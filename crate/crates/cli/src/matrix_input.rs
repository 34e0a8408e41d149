//! Reader for the matrix input file:
//!
//! ```json
//! { "n": 2, "theta0": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]], "omega0": [...] }
//! ```
//!
//! Entries are `[re, im]` pairs, rows outermost. Errors name the first bad field.

use pendulum_core::{CMatrix, Complex, HermitianMatrix};
use serde_json::Value;

/// Hermiticity tolerance for input matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug)]
pub struct MatrixInput {
    pub theta0: HermitianMatrix,
    pub omega0: HermitianMatrix,
}

pub fn parse(text: &str) -> Result<MatrixInput, String> {
    let root: Value = serde_json::from_str(text).map_err(|e| format!("input is not valid JSON: {e}"))?;
    let obj = root.as_object().ok_or("input: expected a JSON object")?;
    let n = obj
        .get("n")
        .ok_or("n: missing")?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or("n: expected a positive integer")? as usize;
    let theta0 = matrix(obj.get("theta0"), "theta0", n)?;
    let omega0 = matrix(obj.get("omega0"), "omega0", n)?;
    Ok(MatrixInput { theta0, omega0 })
}

fn matrix(v: Option<&Value>, name: &str, n: usize) -> Result<HermitianMatrix, String> {
    let rows = v
        .ok_or_else(|| format!("{name}: missing"))?
        .as_array()
        .ok_or_else(|| format!("{name}: expected an array of rows"))?;
    if rows.len() != n {
        return Err(format!("{name}: expected {n} rows, found {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| format!("{name}[{i}]: expected an array"))?;
        if row.len() != n {
            return Err(format!("{name}[{i}]: expected {n} entries, found {}", row.len()));
        }
        for (j, z) in row.iter().enumerate() {
            entries.push(
                complex(z)
                    .ok_or_else(|| format!("{name}[{i}][{j}]: expected [re, im] with finite numbers"))?,
            );
        }
    }
    let m = CMatrix::from_rows(n, entries).map_err(|e| format!("{name}: {e}"))?;
    HermitianMatrix::new(m, HERMITIAN_TOL).map_err(|e| format!("{name}: not Hermitian ({e})"))
}

fn complex(v: &Value) -> Option<Complex> {
    match v.as_array()?.as_slice() {
        [re, im] => {
            let (re, im) = (re.as_f64()?, im.as_f64()?);
            (re.is_finite() && im.is_finite()).then(|| Complex::new(re, im))
        }
        _ => None,
    }
}
