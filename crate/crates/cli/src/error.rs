use std::fmt;
use std::process::ExitCode;

pub enum CliError {
    /// Malformed files or arguments: exit 2.
    Input(String),
    /// Library errors: exit 1 for domain errors, 2 for input errors.
    Lib { context: Option<String>, error: rankone::Error },
    /// The verify suite found failures: exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Lib { error, .. } if error.is_input_error() => ExitCode::from(2),
            CliError::Lib { .. } | CliError::Failed(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Failed(msg) => f.write_str(msg),
            CliError::Lib { context: Some(c), error } => write!(f, "{}: {c}: {error}", error.kind()),
            CliError::Lib { context: None, error } => write!(f, "{}: {error}", error.kind()),
        }
    }
}

impl From<rankone::Error> for CliError {
    fn from(error: rankone::Error) -> Self {
        CliError::Lib { context: None, error }
    }
}

pub type CliResult<T> = Result<T, CliError>;
