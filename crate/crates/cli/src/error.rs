use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure at {point}: {source}")]
    Numerical {
        point: String,
        #[source]
        source: battery_core::Error,
    },

    #[error("output error: {0}")]
    Output(String),

    #[error("golden data mismatch: {0}")]
    Golden(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical { .. } | CliError::Golden(_) => 2,
            _ => 1,
        }
    }

    pub fn numerical(point: impl Into<String>, source: battery_core::Error) -> Self {
        CliError::Numerical {
            point: point.into(),
            source,
        }
    }
}
