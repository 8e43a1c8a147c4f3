use besselidx::Error;

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Tolerance(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Tolerance(m) => write!(f, "tolerance failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(m) => CliError::Domain(m),
            Error::PoleOfGamma { .. }
            | Error::RouteUnavailable(_)
            | Error::TruncationInfeasible(_)
            | Error::Divergence(_) => CliError::Domain(e.to_string()),
            Error::NoConvergence { .. }
            | Error::TruncationInsufficient { .. }
            | Error::NonFinite { .. }
            | Error::TailDominance { .. } => CliError::Tolerance(e.to_string()),
            // a malformed or unreadable reference file is a file problem
            Error::Io(m) => CliError::Io(m),
            Error::Golden(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
