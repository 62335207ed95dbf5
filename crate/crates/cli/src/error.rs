use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag values (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Unreadable, malformed or too-short input, or an I/O failure (exit 3).
    #[error("{0}")]
    Data(String),
    /// A numeric routine could not produce a trustworthy value (exit 4).
    #[error("{0}")]
    Numeric(String),
    /// Argument parsing, including `--help` and `--version`.
    #[error(transparent)]
    Clap(#[from] clap::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Clap(e) => e.exit_code(),
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }
}

impl From<qcorr_core::Error> for CliError {
    fn from(e: qcorr_core::Error) -> Self {
        use qcorr_core::Error as E;
        match e {
            E::Truncation { .. } => CliError::Numeric(e.to_string()),
            E::InsufficientData(_) => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(format!("csv error: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let t = qcorr_core::Error::Truncation {
            lag: 5,
            tail: 1.0,
            tolerance: 0.1,
        };
        assert_eq!(CliError::from(t).exit_code(), 4);
        assert_eq!(
            CliError::from(qcorr_core::Error::InsufficientData("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(qcorr_core::Error::Domain("x".into())).exit_code(),
            2
        );
    }
}
