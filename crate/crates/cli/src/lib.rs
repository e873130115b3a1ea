//! Report construction, sweeps and certificate re-verification behind the
//! `radhopf` command.

use std::fmt;

use hopf_radical::Error;

pub mod json;
pub mod report;
pub mod sweep;

pub const EXIT_FREE: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_NOT_FREE: u8 = 10;
pub const EXIT_WILD: u8 = 20;

/// Environment variable overriding the factorization norm bound.
pub const MAX_NORM_ENV: &str = "RADHOPF_MAX_NORM";

/// A report or checkpoint file that does not match the expected schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
