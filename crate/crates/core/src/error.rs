use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material `{name}`: {reason}")]
    InvalidMaterial { name: String, reason: String },

    #[error("material schema error in {source_name} line {line}: {message}")]
    Schema {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no surface wave root in ({lo:.6}, {hi:.6}) m/s")]
    NoSurfaceRoot { lo: f64, hi: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::InvalidMaterial { .. }
                | Error::Schema { .. }
                | Error::UnknownMaterial(_)
                | Error::Io { .. }
        )
    }
}
