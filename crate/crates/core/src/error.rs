use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at {location} (field `{field}`): {message}")]
    Parse {
        field: String,
        location: String,
        message: String,
    },

    #[error("{what} refused: n = {n} exceeds the enumeration limit of {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    /// Every assignment of the (reparameterized) HOP is forbidden.
    #[error("infeasible HOP: {0}")]
    InfeasibleHop(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(
        field: impl Into<String>,
        location: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            field: field.into(),
            location: location.into(),
            message: message.into(),
        }
    }
}
