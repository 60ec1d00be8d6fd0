use std::fs;
use std::io::Write;
use std::path::Path;

use adr_core::ProblemSpec;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn load_problem(path: &Path) -> CliResult<ProblemSpec> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(ProblemSpec::from_json_str(&text)?)
}

/// Pretty JSON with a trailing newline, to `out` or stdout.
pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::new("SERIALIZE", e.to_string()))?;
    text.push('\n');
    emit_bytes(text.as_bytes(), out)
}

pub fn emit_bytes(bytes: &[u8], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::new("IO_ERROR", e.to_string())),
    }
}
