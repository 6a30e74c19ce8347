//! Diagnostics and their exit statuses.

use jacobiform::deriv::DerivError;
use jacobiform::expansion::ExpansionError;
use jacobiform::interp::InterpError;
use jacobiform::lang::{SyntaxError, TypeError};
use jacobiform::rewrite::DeriveError;
use jacobiform::tensor::TensorError;
use serde_json::{json, Value as Json};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Malformed invocation or unreadable input.
    #[error("{0}")]
    Usage(String),
    #[error("{file}:{}:{}: expected {}", .err.line, .err.column, .err.expected)]
    Syntax { file: String, err: SyntaxError },
    /// A well-formed request the domain rejects.
    #[error("{kind}: {message}")]
    Domain { kind: &'static str, message: String, path: Option<String> },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Syntax { .. } => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn domain(kind: &'static str, message: impl Into<String>) -> Self {
        CliError::Domain { kind, message: message.into(), path: None }
    }

    pub fn to_json(&self) -> Json {
        let error = match self {
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
            CliError::Syntax { file, err } => json!({
                "kind": "syntax",
                "file": file,
                "line": err.line,
                "column": err.column,
                "expected": err.expected,
            }),
            CliError::Domain { kind, message, path } => json!({ "kind": kind, "message": message, "path": path }),
        };
        json!({ "ok": false, "error": error })
    }

    pub fn syntax(file: &str, err: SyntaxError) -> Self {
        CliError::Syntax { file: file.to_string(), err }
    }

    pub fn from_type(err: &TypeError) -> Self {
        CliError::Domain { kind: "type_error", message: err.to_string(), path: Some(err.path().to_string()) }
    }

    pub fn from_deriv(err: DerivError) -> Self {
        match err {
            DerivError::IllTyped(e) => Self::from_type(&e),
            other => Self::domain("derivative", other.to_string()),
        }
    }

    pub fn from_expansion(err: ExpansionError) -> Self {
        match err {
            ExpansionError::IllTyped(e) => Self::from_type(&e),
            other => Self::domain("expansion", other.to_string()),
        }
    }

    pub fn from_derive(err: DeriveError) -> Self {
        match err {
            DeriveError::TypeMismatch(e) => Self::from_type(&e),
            other => Self::domain("rewrite", other.to_string()),
        }
    }

    pub fn from_interp(file: &str, err: InterpError) -> Self {
        match err {
            InterpError::Syntax(e) => Self::syntax(file, e),
            InterpError::PolySyntax(m) => CliError::Usage(format!("{file}: {m}")),
            InterpError::IllTyped(e) => Self::from_type(&e),
            other => Self::domain("interpretation", other.to_string()),
        }
    }

    pub fn from_tensor(file: &str, err: TensorError) -> Self {
        match err {
            TensorError::Syntax(e) => Self::syntax(file, e),
            TensorError::Interp(e) => Self::from_interp(file, e),
            other => Self::domain("tensor", other.to_string()),
        }
    }
}
