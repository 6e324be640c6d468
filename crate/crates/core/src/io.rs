//! JSON matrix files.
//!
//! ```json
//! { "n": 2, "mode": "float",    "entries": [[[1, 0], [0.5, 0]], [[0.5, 0], [1, 0]]] }
//! { "n": 2, "mode": "rational", "entries": [[["1", "0"], ["1/2", "0"]], [["1/2", "0"], ["1", "0"]]] }
//! ```
//!
//! Each entry is `[re, im]`: decimal numbers in float mode, `"p/q"` strings in
//! rational mode.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::{GaussRat, Rational, Real, Realization, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

impl From<Realization> for Mode {
    fn from(r: Realization) -> Self {
        match r {
            Realization::Float => Mode::Float,
            Realization::Rational => Mode::Rational,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub mode: Mode,
    pub entries: Vec<Vec<[Value; 2]>>,
}

/// A parsed matrix in whichever realization the file declared.
#[derive(Clone, Debug)]
pub enum AnyMatrix {
    Float(SquareMatrix<Complex64>),
    Rational(SquareMatrix<GaussRat>),
}

impl MatrixFile {
    pub fn from_matrix<S: Scalar>(m: &SquareMatrix<S>) -> Self {
        let entries = m
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match S::REALIZATION {
                        Realization::Float => [Value::from(v.re().to_f64()), Value::from(v.im().to_f64())],
                        Realization::Rational => [Value::from(v.re().to_string()), Value::from(v.im().to_string())],
                    })
                    .collect()
            })
            .collect();
        MatrixFile {
            n: m.n(),
            mode: S::REALIZATION.into(),
            entries,
        }
    }

    pub fn parse(self) -> Result<AnyMatrix> {
        if self.entries.len() != self.n {
            return Err(Error::Parse(format!(
                "declared n = {} but found {} rows",
                self.n,
                self.entries.len()
            )));
        }
        if let Some((i, row)) = self.entries.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                self.n
            )));
        }
        match self.mode {
            Mode::Float => {
                let data = self
                    .entries
                    .iter()
                    .flatten()
                    .map(|[re, im]| Ok(Complex64::new(float_part(re)?, float_part(im)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyMatrix::Float(SquareMatrix::new(self.n, data)?))
            }
            Mode::Rational => {
                let data = self
                    .entries
                    .iter()
                    .flatten()
                    .map(|[re, im]| Ok(GaussRat::new(rational_part(re)?, rational_part(im)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyMatrix::Rational(SquareMatrix::new(self.n, data)?))
            }
        }
    }
}

fn float_part(v: &Value) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("expected a finite number, got {v}")))
}

fn rational_part(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_i64(n.as_i64().unwrap_or(0))),
        other => Err(Error::Parse(format!("expected a \"p/q\" string, got {other}"))),
    }
}

pub fn parse_matrix_str(text: &str) -> Result<AnyMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.parse()
}

pub fn read_matrix_file(path: &Path) -> Result<AnyMatrix> {
    parse_matrix_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_modes() {
        let f = r#"{"n":2,"mode":"float","entries":[[[1,0],[0.5,-0.25]],[[0.5,0.25],[1,0]]]}"#;
        let AnyMatrix::Float(m) = parse_matrix_str(f).unwrap() else { panic!() };
        assert_eq!(*m.get(0, 1), Complex64::new(0.5, -0.25));

        let q = r#"{"n":2,"mode":"rational","entries":[[["1","0"],["1/2","0"]],[["1/2","0"],["1","0"]]]}"#;
        let AnyMatrix::Rational(m) = parse_matrix_str(q).unwrap() else { panic!() };
        assert_eq!(*m.get(1, 0), GaussRat::from_ratios(1, 2, 0, 1));
    }

    #[test]
    fn rejects_malformed_files() {
        let ragged = r#"{"n":2,"mode":"float","entries":[[[1,0],[0,0]],[[1,0]]]}"#;
        assert!(parse_matrix_str(ragged).is_err());
        let short = r#"{"n":3,"mode":"float","entries":[[[1,0]]]}"#;
        assert!(parse_matrix_str(short).is_err());
        let zero_den = r#"{"n":1,"mode":"rational","entries":[[["1/0","0"]]]}"#;
        assert!(parse_matrix_str(zero_den).is_err());
        let wrong_kind = r#"{"n":1,"mode":"float","entries":[[["1","0"]]]}"#;
        assert!(parse_matrix_str(wrong_kind).is_err());
        assert!(parse_matrix_str("not json").is_err());
    }

    #[test]
    fn writes_what_it_reads() {
        let m = SquareMatrix::from_fn(3, |i, j| GaussRat::from_ratios(i as i64 - 1, 3, j as i64, 7));
        let text = serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap();
        let AnyMatrix::Rational(back) = parse_matrix_str(&text).unwrap() else { panic!() };
        assert_eq!(back, m);
    }
}
