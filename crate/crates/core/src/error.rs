use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Wikitext that cannot be reduced to plain text.
    #[error("markup error at byte {offset}: {message}")]
    Markup { offset: usize, message: String },

    /// A malformed input record (XML, JSON lines, tagged text, condition codes).
    #[error("parse error ({location}): {message}")]
    Parse { location: String, message: String },

    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sampling pool ran dry before the requested size was reached.
    #[error("insufficient pool: achieved {achieved} of target {target}")]
    InsufficientPool { achieved: u64, target: u64 },

    /// Statistical test on groups with no spread at all.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A pipeline stage failed; carries the stage name and condition code.
    #[error("{stage} [{condition}]: {source}")]
    Stage {
        stage: &'static str,
        condition: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Attach a stage name and condition label.
    pub fn in_stage(self, stage: &'static str, condition: impl Into<String>) -> Self {
        Error::Stage {
            stage,
            condition: condition.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad input data (as opposed to I/O).
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::Io(_) => false,
            Error::Stage { source, .. } => source.is_data_error(),
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
