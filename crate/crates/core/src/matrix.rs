//! Distance matrices and their text formats.
//!
//! CSV: an optional first row of labels, then one row per point. An input's
//! first row is taken as the label header when any of its cells fails to
//! read as a number. JSON: `{ "labels": [..]?, "matrix": [[..], ..] }` where
//! entries are numbers or strings in the [`Scalar`] grammar.

use std::collections::HashSet;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, MetricFault, Result};
use crate::scalar::{parse_rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "json" => Ok(MatrixFormat::Json),
            other => Err(format!("unknown matrix format `{other}`")),
        }
    }
}

/// Options for [`parse_matrix_with`].
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// When set, entries closer than this to an earlier, smaller entry are
    /// snapped onto it before validation. Meant for matrices exported from
    /// floating point code.
    pub snap_epsilon: Option<Scalar>,
}

/// Default snapping tolerance for float-derived input, 10⁻⁹.
pub fn default_snap_epsilon() -> Scalar {
    Scalar::ratio(1, 1_000_000_000)
}

/// A symmetric matrix of exact distances with zero diagonal and positive
/// off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Scalar>,
    labels: Option<Vec<String>>,
}

impl DistanceMatrix {
    /// Builds a matrix from raw (possibly negative) rationals, reporting the
    /// first offending cell in row-major order.
    #[allow(clippy::needless_range_loop)]
    pub fn from_rows(rows: Vec<Vec<BigRational>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("matrix has no rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = &rows[i][j];
                let fault = if v.is_negative() {
                    Some(MetricFault::Negative)
                } else if i == j && !v.is_zero() {
                    Some(MetricFault::NonzeroDiagonal)
                } else if i != j && v.is_zero() {
                    Some(MetricFault::ZeroOffDiagonal)
                } else if j < i && rows[i][j] != rows[j][i] {
                    Some(MetricFault::Asymmetric)
                } else {
                    None
                };
                if let Some(fault) = fault {
                    return Err(Error::Metric { row: i, col: j, fault });
                }
            }
        }
        let entries = rows
            .into_iter()
            .flatten()
            .map(|v| Scalar::new(v).expect("checked nonnegative"))
            .collect();
        let matrix = DistanceMatrix { n, entries, labels: None };
        matrix.with_labels(labels)
    }

    /// Builds a matrix from a distance function on `0..n`; only `f(i, j)` with
    /// `i < j` is consulted.
    #[allow(clippy::needless_range_loop)]
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Result<Self> {
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j).into_rational();
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        DistanceMatrix::from_rows(rows, None)
    }

    /// Replaces the labels, checking count and distinctness.
    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(labels) = &labels {
            if labels.len() != self.n {
                return Err(Error::Shape(format!(
                    "{} labels for {} points",
                    labels.len(),
                    self.n
                )));
            }
            let mut seen = HashSet::new();
            for label in labels {
                if !seen.insert(label) {
                    return Err(Error::parse(format!("duplicate label `{label}`")));
                }
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The display name of point `i`: its label, or its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.entries.chunks(self.n)
    }

    /// The submatrix on `points`, in the given order.
    pub(crate) fn submatrix(&self, points: &[usize]) -> DistanceMatrix {
        let m = points.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in points {
            for &j in points {
                entries.push(self.get(i, j).clone());
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| points.iter().map(|&i| l[i].clone()).collect());
        DistanceMatrix { n: m, entries, labels }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(labels) = &self.labels {
            let mut writer = csv::WriterBuilder::new().from_writer(vec![]);
            writer.write_record(labels).expect("write to memory");
            let header = writer.into_inner().expect("flush to memory");
            out.push_str(&String::from_utf8(header).expect("labels are utf-8"));
        }
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Scalar::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = MatrixDoc {
            labels: self.labels.clone(),
            matrix: self.rows().map(|r| r.to_vec()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("matrix serializes")
    }

    pub fn to_format(&self, format: MatrixFormat) -> String {
        match format {
            MatrixFormat::Csv => self.to_csv(),
            MatrixFormat::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Serialize)]
struct MatrixDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrixDoc {
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<serde_json::Value>>,
}

/// Reads a matrix in the given format with exact parsing.
pub fn parse_matrix(raw: &str, format: MatrixFormat) -> Result<DistanceMatrix> {
    parse_matrix_with(raw, format, &ParseOptions::default())
}

pub fn parse_matrix_with(
    raw: &str,
    format: MatrixFormat,
    options: &ParseOptions,
) -> Result<DistanceMatrix> {
    let (mut rows, labels) = match format {
        MatrixFormat::Csv => read_csv(raw)?,
        MatrixFormat::Json => read_json(raw)?,
    };
    if let Some(eps) = &options.snap_epsilon {
        snap(&mut rows, eps.as_rational());
    }
    DistanceMatrix::from_rows(rows, labels)
}

type RawMatrix = (Vec<Vec<BigRational>>, Option<Vec<String>>);

fn read_csv(raw: &str) -> Result<RawMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(raw.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize),
            column: None,
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize);
        records.push((line, record));
    }
    let mut labels = None;
    let mut body = &records[..];
    if let Some((_, first)) = records.first() {
        if first.iter().any(|cell| parse_rational(cell).is_err()) {
            labels = Some(first.iter().map(str::to_string).collect());
            body = &records[1..];
        }
    }
    let mut rows = Vec::with_capacity(body.len());
    for (line, record) in body {
        let mut row = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            let value = parse_rational(cell).map_err(|e| Error::Parse {
                line: *line,
                column: Some(col + 1),
                message: e.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok((rows, labels))
}

fn read_json(raw: &str) -> Result<RawMatrix> {
    let doc: RawMatrixDoc = serde_json::from_str(raw).map_err(|e| Error::Parse {
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    let mut rows = Vec::with_capacity(doc.matrix.len());
    for (i, raw_row) in doc.matrix.iter().enumerate() {
        let mut row = Vec::with_capacity(raw_row.len());
        for (j, cell) in raw_row.iter().enumerate() {
            let text = match cell {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(num) => num.to_string(),
                other => {
                    return Err(Error::parse(format!("matrix[{i}][{j}]: expected a number, got {other}")))
                }
            };
            let value = parse_rational(&text)
                .map_err(|e| Error::parse(format!("matrix[{i}][{j}]: {e}")))?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok((rows, doc.labels))
}

/// Snaps every entry onto the smallest value of its cluster, where clusters
/// are formed greedily over the sorted distinct values: a value joins the
/// current cluster while it lies within `eps` of the cluster's anchor. Zero
/// is always an anchor, so near-zero entries become exactly zero.
fn snap(rows: &mut [Vec<BigRational>], eps: &BigRational) {
    let mut values: Vec<BigRational> = rows.iter().flatten().cloned().collect();
    values.push(BigRational::zero());
    values.sort();
    values.dedup();
    let mut anchors: Vec<(BigRational, BigRational)> = Vec::new();
    let mut anchor: Option<BigRational> = None;
    for v in values {
        match &anchor {
            Some(a) if &v - a <= *eps => anchors.push((v, a.clone())),
            _ => {
                anchors.push((v.clone(), v.clone()));
                anchor = Some(v);
            }
        }
    }
    let zero_anchor = |v: &BigRational| v.abs() <= *eps;
    for cell in rows.iter_mut().flatten() {
        if zero_anchor(cell) {
            *cell = BigRational::zero();
            continue;
        }
        let idx = anchors
            .binary_search_by(|(v, _)| v.cmp(cell))
            .expect("every value was collected");
        *cell = anchors[idx].1.clone();
    }
}
