use thiserror::Error;

/// What went wrong while reading an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] modinv_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Short machine-readable tag printed as `error[kind]`.
    pub fn kind(&self) -> &'static str {
        use modinv_core::Error as E;
        match self {
            CliError::Parse(e) => match e.kind {
                ParseErrorKind::Syntax => "syntax",
                ParseErrorKind::UnknownIdentifier => "unknown-identifier",
                ParseErrorKind::Arity => "arity",
            },
            CliError::Core(e) => match e {
                E::InvalidPrime(_) => "prime",
                E::UnknownIdentity(_) => "unknown-id",
                E::Hypothesis(_) => "hypothesis",
                E::Overflow(_) => "overflow",
                E::Syntax { .. } => "syntax",
                E::IndexOutOfRange { .. } | E::InvalidVariableCount { .. } => "range",
                _ => "eval",
            },
            CliError::Usage(_) => "usage",
        }
    }

    /// The single-line report written to stderr.
    pub fn report(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("error[{}]: {msg}", self.kind())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
