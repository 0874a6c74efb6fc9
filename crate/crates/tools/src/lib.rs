//! File formats, workspace loading and the commands behind the `eulerch`
//! binary.

pub mod commands;
pub mod doc;
pub mod experiment;
pub mod workspace;

pub use commands::{canon, euler, homology, ingest, validate, EulerMode, EulerOptions, Output};
pub use doc::{Document, FileDoc};
pub use experiment::{experiment, ExperimentOptions, Stat};
pub use workspace::{ToolError, Workspace};
