//! Single-line JSON error reports.

use std::fmt;

use serde_json::json;

use crate::config::Origin;

#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub origin: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn config(key: Option<&str>, origin: Origin, message: String) -> Self {
        let line = match origin {
            Origin::File(l) => Some(l),
            _ => None,
        };
        Self {
            kind: "config",
            key: key.map(str::to_string),
            line,
            origin: Some(origin.to_string()),
            message,
        }
    }

    pub fn usage(message: String) -> Self {
        Self {
            kind: "usage",
            key: None,
            line: None,
            origin: None,
            message,
        }
    }

    pub fn io(message: String) -> Self {
        Self {
            kind: "io",
            key: None,
            line: None,
            origin: None,
            message,
        }
    }

    pub fn with_key(mut self, key: &str) -> Self {
        self.key = Some(key.to_string());
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            "config" | "usage" => 2,
            _ => 1,
        }
    }

    pub fn to_json_line(&self) -> String {
        json!({
            "error": self.kind,
            "key": self.key,
            "line": self.line,
            "origin": self.origin,
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_line())
    }
}

impl From<landau_wave::Error> for Diagnostic {
    fn from(e: landau_wave::Error) -> Self {
        use landau_wave::Error as E;
        let kind = match &e {
            E::Io(_) => "io",
            E::Csv(_) | E::Json(_) | E::Parse(_) => "format",
            E::Usage(_) | E::InvalidField(_) | E::InvalidMode(_) | E::NotStrictlyHyperbolic { .. } => "usage",
            _ => "numerics",
        };
        Self {
            kind,
            key: None,
            line: None,
            origin: None,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Diagnostic {
    fn from(e: std::io::Error) -> Self {
        Diagnostic::io(e.to_string())
    }
}
