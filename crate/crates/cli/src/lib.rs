//! Library side of the `hcolim` command: the chain file format, reports, and
//! one function per subcommand.

pub mod commands;
pub mod file;
pub mod report;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("cannot parse chain file: {0}")]
    Parse(serde_json::Error),
    #[error(transparent)]
    Core(#[from] hilbert_colim::Error),
    #[error("the chain file has no cocone")]
    MissingCocone,
    #[error("bad class {0:?}; expected INDEX:x0,x1,...")]
    BadClass(String),
    #[error("{0}")]
    Usage(String),
}
