use shapql::game::OracleError;
use shapql::lab::LabError;
use shapql::pqe::PqeError;
use shapql::shapley::ShapleyError;
use shapql::supports::SupportError;

/// Errors the CLI reports; each class has its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unreadable file, syntax error, invalid parameter, regime violation.
    #[error("{0}")]
    Input(String),
    /// The bounded chase could not decide an entailment.
    #[error("{0}")]
    Unknown(String),
    /// The instance exceeds a size limit.
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unknown(_) => 3,
            CliError::Limit(_) => 4,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Unknown { .. } => CliError::Unknown(e.to_string()),
            OracleError::TooManyPlayers { .. } => CliError::Limit(e.to_string()),
        }
    }
}

impl From<SupportError> for CliError {
    fn from(e: SupportError) -> Self {
        match e {
            SupportError::Oracle(o) => o.into(),
            SupportError::Incomplete { .. } => CliError::Limit(e.to_string()),
        }
    }
}

impl From<ShapleyError> for CliError {
    fn from(e: ShapleyError) -> Self {
        match e {
            ShapleyError::Oracle(o) => o.into(),
            ShapleyError::Supports(s) => s.into(),
            ShapleyError::Limit { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PqeError> for CliError {
    fn from(e: PqeError) -> Self {
        match e {
            PqeError::Unknown => CliError::Unknown(e.to_string()),
            PqeError::Limit { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Oracle(o) => o.into(),
            LabError::Shapley(s) => s.into(),
            LabError::Support(s) => s.into(),
            LabError::TooLarge { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<shapql::text::TextError> for CliError {
    fn from(e: shapql::text::TextError) -> Self {
        CliError::Input(e.to_string())
    }
}
