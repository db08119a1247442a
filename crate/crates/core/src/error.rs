//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition on an input value is violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Emitter or detector placed somewhere the model does not cover.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A sampling grid is malformed or too coarse for the requested job.
    #[error("grid error: {0}")]
    Grid(String),

    /// Peak extraction or least-squares refinement failed.
    #[error("fit error: {0}")]
    Fit(String),

    /// A numerical routine detected a pathology it cannot recover from.
    #[error("numerical error: {0}")]
    Numerics(String),

    /// Configuration file or override problem.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 2 for configuration errors, 3 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }

    /// Stable machine-readable category name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Geometry(_) => "geometry",
            Error::Grid(_) => "grid",
            Error::Fit(_) => "fit",
            Error::Numerics(_) => "numerics",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}
