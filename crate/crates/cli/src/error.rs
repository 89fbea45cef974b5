use std::fmt;

/// CLI failure classes, mapped onto the exit-code contract:
/// 1 for malformed arguments or unusable input files, 2 for cryptographic
/// errors, 3 for a failed correctness check.
#[derive(Debug)]
pub enum CliError {
    Args(String),
    Crypto(cipherbridge::Error),
    Check(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) | CliError::Io(_) => 1,
            CliError::Crypto(_) => 2,
            CliError::Check(_) => 3,
        }
    }

    fn class(&self) -> &'static str {
        match self {
            CliError::Args(_) => "args",
            CliError::Crypto(_) => "crypto",
            CliError::Check(_) => "check",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.class(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Args(msg) => write!(f, "{msg}"),
            CliError::Crypto(e) => write!(f, "{e}"),
            CliError::Check(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cipherbridge::Error> for CliError {
    fn from(e: cipherbridge::Error) -> Self {
        CliError::Crypto(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
