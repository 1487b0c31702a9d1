//! Matrix JSON: `{"rows": n, "cols": m, "data": [[re, im], …]}`, row-major.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Wire form of a matrix, as read from disk.
#[derive(Debug, Clone, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn into_matrix(self) -> Result<CMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Invalid("matrix must be at least 1x1".into()));
        }
        let data = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let m = CMatrix::from_vec(self.rows, self.cols, data)?;
        m.ensure_finite()?;
        Ok(m)
    }
}

impl CMatrix {
    /// Parses the matrix JSON format.
    pub fn from_json(text: &str) -> Result<CMatrix> {
        serde_json::from_str::<MatrixJson>(text)?.into_matrix()
    }

    /// Serializes with 17 significant digits per component, so values
    /// round-trip exactly.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(48 * self.data().len() + 32);
        let _ = write!(out, "{{\"rows\": {}, \"cols\": {}, \"data\": [", self.rows(), self.cols());
        for (k, z) in self.data().iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "[{}, {}]", fmt17(z.re), fmt17(z.im));
        }
        out.push_str("]}");
        out
    }
}

/// A float with 17 significant digits in JSON-compatible exponent form.
pub(crate) fn fmt17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    CMatrix::from_json(&text)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    std::fs::write(path, m.to_json() + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = CMatrix::from_fn(2, 3, |i, j| C64::new(0.1 * i as f64 - 1.0 / 3.0, std::f64::consts::PI * j as f64));
        let back = CMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CMatrix::from_json(r#"{"rows": 1, "cols": 2, "data": [[1, 0]]}"#).is_err());
        assert!(CMatrix::from_json(r#"{"rows": 0, "cols": 0, "data": []}"#).is_err());
    }

    #[test]
    fn emits_seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-0.0), "0.0000000000000000e0");
    }
}
