//! Driver for the `lcsvm` command: synthesize a scene, tune and train
//! one-against-one and one-against-all classifiers for each kernel,
//! classify the raster, assess the maps against reference pixels and
//! compare the two strategies.
//!
//! Every output file name encodes the strategy and kernel, e.g.
//! `model_1a1_rbf.lcm`, `map_1aa_linear.ppm`, `assess_1a1_quadratic.txt`.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use landcover_svm::Error;

pub use commands::{cmd_assess, cmd_classify, cmd_compare, cmd_run, cmd_synth, cmd_train};
pub use config::{Overrides, RunConfig};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_TRAINING: i32 = 4;
pub const EXIT_INCOMPLETE: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn file(path: impl Into<PathBuf>) -> impl FnOnce(Error) -> CliError {
        let path = path.into();
        move |source| CliError::File { path, source }
    }

    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Config(_) => return EXIT_CONFIG,
            CliError::File { source, .. } => source,
            CliError::Core(e) => e,
        };
        match core.root() {
            Error::Parse { .. } => EXIT_PARSE,
            Error::Convergence { .. } | Error::DegenerateTraining(_) => EXIT_TRAINING,
            Error::IncompleteGrid(_) => EXIT_INCOMPLETE,
            _ => EXIT_OTHER,
        }
    }
}
