use serde_json::{json, Value};
use ultrametric::Error;

/// Everything that ends a run unsuccessfully.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Io { path: String, message: String },
    Usage(String),
    /// A check verb ran to completion and found a counterexample.
    Check { kind: &'static str, message: String, witness: Value },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_input_error() => 2,
            Failure::Lib(_) | Failure::Check { .. } => 1,
            Failure::Io { .. } | Failure::Usage(_) => 2,
        }
    }

    /// `{"error": kind, "message": text, "witness": {...}}`.
    pub fn to_json(&self) -> Value {
        let (kind, message, witness) = match self {
            Failure::Lib(e) => (e.kind(), e.to_string(), witness(e)),
            Failure::Io { path, message } => ("IoError", format!("{path}: {message}"), json!({ "path": path })),
            Failure::Usage(message) => ("UsageError", message.clone(), json!({})),
            Failure::Check { kind, message, witness } => (*kind, message.clone(), witness.clone()),
        };
        json!({ "error": kind, "message": message, "witness": witness })
    }
}

fn witness(e: &Error) -> Value {
    let value = match e {
        Error::Parse { line, column, .. } => json!({ "line": line, "column": column }),
        Error::Shape(_) => json!({}),
        Error::Metric { row, col, fault } => json!({ "row": row, "col": col, "fault": fault.to_string() }),
        Error::NotUltrametric(v) => serde_json::to_value(v).ok().unwrap_or_default(),
        Error::IndexOutOfRange { index, n } => json!({ "index": index, "n": n }),
        Error::DegenerateSpace { n } => json!({ "n": n }),
        Error::CapExceeded { n, cap, .. } => json!({ "n": n, "cap": cap }),
        Error::AxiomViolation(report) => serde_json::to_value(&report.witness).ok().unwrap_or_default(),
        Error::DiamMismatch(m) => json!({ "subset": m.subset, "tau": m.tau, "diam": m.diam }),
        Error::BadScales { inner, outer } => json!({ "inner": inner, "outer": outer }),
        Error::ApexTooClose { level, diam } => json!({ "level": level, "diam": diam }),
        Error::NotCompleteMultipartiteInput(Some((u, v))) => json!({ "u": u, "v": v }),
        Error::Chain(c) => serde_json::to_value(c).ok().unwrap_or_default(),
        Error::InvalidDendrogram { path, .. } => json!({ "path": path }),
        _ => json!({}),
    };
    if value.is_null() {
        json!({})
    } else {
        value
    }
}
