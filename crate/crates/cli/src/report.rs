use ellsurf::exactalg::{format_rational, QMatrix, Rational};
use ellsurf::Error;
use serde_json::Value;

/// A command's result: JSON for machines, text for people.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Set when a golden check failed; the command still prints everything.
    pub failed: bool,
}

impl Report {
    pub fn new(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            failed: false,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            // serde_json's default map is ordered by key
            serde_json::to_string_pretty(&self.json).expect("report serializes")
        } else {
            self.text.trim_end().to_string()
        }
    }
}

pub fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn matrix(m: &QMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(q).collect()))
            .collect(),
    )
}

pub fn exit_code(e: &Error) -> u8 {
    if e.is_usage() {
        2
    } else {
        1
    }
}
