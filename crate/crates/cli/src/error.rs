use std::fmt;

/// A failure carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PROPRIETY: i32 = 3;
pub const EXIT_INIT: i32 = 4;
pub const EXIT_ELICIT: i32 = 5;

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<btv_core::Error> for CliError {
    fn from(e: btv_core::Error) -> Self {
        use btv_core::Error::*;
        let code = match e {
            Domain(_) | Format(_) => EXIT_INPUT,
            Propriety(_) => EXIT_PROPRIETY,
            Initialization(_) => EXIT_INIT,
            Elicitation(_) => EXIT_ELICIT,
            Convergence { .. } | EmptyChain | DegenerateChain(_) | Fit(_) => EXIT_OTHER,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self { code: EXIT_OTHER, message: format!("serialization failed: {e}") }
    }
}

pub type CliResult<T> = Result<T, CliError>;
