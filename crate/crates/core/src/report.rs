//! Versioned JSON reports with deterministic layout.
//!
//! Objects are emitted with sorted keys. Non-finite floats become the strings
//! `"-inf"`, `"inf"` and `"nan"` so the output stays strict JSON; finite
//! floats use the shortest representation that parses back to the same value.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::ext_real::ExtReal;
use crate::matrix::NonnegMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    PropertyFailed,
    NotCertified,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::PropertyFailed => 1,
            Status::NotCertified => 2,
            Status::InvalidInput => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PropertyFailed => "property_failed",
            Status::NotCertified => "not_certified",
            Status::InvalidInput => "invalid_input",
        }
    }

    /// Keeps the more severe of two outcomes; invalid input dominates.
    pub fn worst(self, other: Status) -> Status {
        if other.exit_code() > self.exit_code() {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub inputs_digest: String,
    pub status: Status,
    pub result: Map<String, Value>,
    pub error: Option<String>,
    pub generated_at_unix: Option<u64>,
}

impl Report {
    pub fn new(command: &'static str, inputs: &[u8]) -> Self {
        Self {
            command,
            inputs_digest: digest(inputs),
            status: Status::Pass,
            result: Map::new(),
            error: None,
            generated_at_unix: None,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.result.insert(key.to_owned(), value);
        self
    }

    /// Records an outcome, keeping the most severe one seen so far.
    pub fn raise(&mut self, status: Status) {
        self.status = self.status.worst(status);
    }

    pub fn fail(&mut self, status: Status, message: impl Into<String>) {
        self.raise(status);
        if self.error.is_none() {
            self.error = Some(message.into());
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn stamp(&mut self, reproducible: bool) {
        self.generated_at_unix = if reproducible {
            None
        } else {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        };
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema".into(), json!(SCHEMA_VERSION));
        top.insert("command".into(), json!(self.command));
        top.insert("inputs_digest".into(), json!(self.inputs_digest));
        top.insert("status".into(), json!(self.status.label()));
        top.insert("exit_code".into(), json!(self.exit_code()));
        top.insert("result".into(), Value::Object(self.result.clone()));
        if let Some(e) = &self.error {
            top.insert("error".into(), json!(e));
        }
        if let Some(t) = self.generated_at_unix {
            top.insert("generated_at_unix".into(), json!(t));
        }
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Lowercase hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| num(v)).collect())
}

pub fn rows(rows: &[Vec<f64>]) -> Value {
    Value::Array(rows.iter().map(|r| nums(r)).collect())
}

pub fn nonneg(m: &NonnegMatrix) -> Value {
    rows(&m.rows())
}

pub fn ext(v: ExtReal) -> Value {
    num(v.value())
}

/// 1-based index pairs.
pub fn pairs(p: &[(usize, usize)]) -> Value {
    Value::Array(p.iter().map(|&(x, y)| json!([x + 1, y + 1])).collect())
}

pub fn indices(idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|i| json!(i + 1)).collect())
}

/// Machine-readable error kind plus its 1-based witness, if any.
pub fn error_value(e: &Error) -> Value {
    let mut v = match e {
        Error::NotIndecomposable { row, col } => {
            json!({"kind": "not_indecomposable", "witness": [row + 1, col + 1]})
        }
        Error::NotBinaryDiagonal {
            element,
            index,
            value,
        } => json!({
            "kind": "not_binary_diagonal",
            "element": element + 1,
            "witness": [index + 1, index + 1],
            "value": num(*value),
        }),
        Error::NotBinaryAfterRescale {
            element,
            row,
            col,
            value,
        } => json!({
            "kind": "not_binary_after_rescale",
            "element": element + 1,
            "witness": [row + 1, col + 1],
            "value": num(*value),
        }),
        Error::Divergent { pairs: p } => json!({"kind": "divergent", "pairs": pairs(p)}),
        Error::BasepointUnusable { basepoint } => {
            json!({"kind": "basepoint_unusable", "basepoint": basepoint.map(|b| b + 1)})
        }
        Error::ClosureIncomplete { size } => json!({"kind": "closure_incomplete", "size": size}),
        Error::TruncationTooShort { len, required } => {
            json!({"kind": "truncation_too_short", "len": len, "required": required})
        }
        Error::PreconditionViolated(_) => json!({"kind": "precondition_violated"}),
        Error::EmptyPositivePart => json!({"kind": "empty_positive_part"}),
        _ => json!({"kind": "invalid_input"}),
    };
    v["message"] = json!(e.to_string());
    v
}
