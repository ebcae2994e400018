use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;
use ultrametric::{
    certify_ultrametric, parse_matrix_with, DistanceMatrix, MatrixFormat, ParseOptions, Scalar, UltrametricSpace,
};

use crate::failure::Failure;

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &str) -> Result<String, Failure> {
    let io_failure = |e: std::io::Error| Failure::Io { path: path.to_string(), message: e.to_string() };
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_failure)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_failure)
    }
}

/// Writes to a file, or stdout for `-` or no path.
pub fn write_output(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        None | Some("-") => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Io { path: "-".into(), message: e.to_string() })
        }
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io { path: p.to_string(), message: e.to_string() }),
    }
}

/// The explicit format, else `.json` files are JSON and everything else CSV.
pub fn input_format(path: &str, explicit: Option<MatrixFormat>) -> MatrixFormat {
    explicit.unwrap_or_else(|| match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
        _ => MatrixFormat::Csv,
    })
}

pub struct MatrixInput {
    pub format: Option<MatrixFormat>,
    pub epsilon: Option<Scalar>,
}

impl MatrixInput {
    pub fn matrix(&self, path: &str) -> Result<DistanceMatrix, Failure> {
        let raw = read_input(path)?;
        self.matrix_from_text(path, &raw)
    }

    pub fn matrix_from_text(&self, path: &str, raw: &str) -> Result<DistanceMatrix, Failure> {
        let options = ParseOptions { snap_epsilon: self.epsilon.clone() };
        Ok(parse_matrix_with(raw, input_format(path, self.format), &options)?)
    }

    pub fn space(&self, path: &str) -> Result<UltrametricSpace, Failure> {
        Ok(certify_ultrametric(self.matrix(path)?).map_err(ultrametric::Error::from)?)
    }
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output documents serialize");
    text.push('\n');
    text
}
