use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: line {line}, column {column}: {message}")]
    Json {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: {message}")]
    Spec { origin: String, message: String },
    #[error(transparent)]
    Core(#[from] defectlab_core::Error),
    #[error("expression: {0}")]
    Expression(String),
    #[error("unknown example {0:?}; try `defectlab examples list`")]
    UnknownExample(String),
    #[error("invalid option: {0}")]
    Option(String),
}

impl CliError {
    pub(crate) fn json(origin: &str, e: &serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message part
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        CliError::Json {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
