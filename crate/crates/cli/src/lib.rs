//! Temperature sweeps of the thermal three-qubit cluster: configuration,
//! parallel evaluation, and CSV/JSON emission.

pub mod config;
pub mod emit;
pub mod records;
pub mod sweep;

use std::io;
use std::path::PathBuf;

pub use config::{ConfigError, Grid, RawConfig, SweepConfig};
pub use emit::{Format, Provenance};
pub use sweep::{run_sweep, SweepPoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOOL: &str = env!("CARGO_PKG_NAME");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{what}: {source}")]
    Numerical {
        what: String,
        source: thermal_cluster_core::Error,
    },

    #[error("{}: line {line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
}

impl Error {
    pub fn numerical(what: impl Into<String>) -> impl FnOnce(thermal_cluster_core::Error) -> Error {
        let what = what.into();
        move |source| Error::Numerical { what, source }
    }

    /// Process exit status: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Numerical { .. } => 2,
            Error::Config(_) | Error::Io { .. } | Error::Format { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
