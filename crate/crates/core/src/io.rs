//! Text exchange formats for covariance matrices and number formatting.
//!
//! Plain-text covariance files hold the mode count `L` on the first line
//! followed by `2L` rows of `2L` whitespace-separated reals. A JSON record
//! `{"modes": L, "entries": [[…], …]}` is accepted as well.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

/// Row-major serde form of a real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<f64>>);

impl MatrixRows {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        MatrixRows(m.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    pub fn into_matrix(self) -> Result<DMatrix<f64>> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if self.0.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let flat: Vec<f64> = self.0.into_iter().flatten().collect();
        Ok(DMatrix::from_row_slice(rows, cols, &flat))
    }
}

/// Parses either the plain-text or the JSON covariance format.
pub fn parse_covariance(text: &str) -> Result<CovarianceMatrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| Error::InvalidInput(e.to_string()));
    }
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty covariance file".into()))?;
    let modes: usize = header
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad mode count {header:?}")))?;
    if modes == 0 {
        return Err(Error::InvalidInput("mode count must be positive".into()));
    }
    let n = 2 * modes;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for line in lines {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad number {t:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "row {} has {} entries, expected {n}",
                rows + 1,
                row.len()
            )));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} rows, found {rows}"
        )));
    }
    CovarianceMatrix::from_row_slice(modes, &data)
}

pub fn format_covariance(cm: &CovarianceMatrix) -> String {
    let mut out = format!("{}\n", cm.modes());
    for row in cm.matrix().row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Formats with 12 significant digits in the style of C's `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
