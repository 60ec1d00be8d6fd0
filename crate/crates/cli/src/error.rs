use serde::Serialize;

/// Machine-readable error printed as `{"error": {"code": .., "message": ..}}`.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Self { code: code.to_string(), message: message.into() }
    }

    pub fn missing(flag: &str) -> Self {
        Self::new("MISSING_ARGUMENT", format!("--{flag} is required"))
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::new("IO_ERROR", format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<adr_core::Error> for CliError {
    fn from(e: adr_core::Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
