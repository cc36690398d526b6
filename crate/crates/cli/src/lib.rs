//! Report builders and renderers behind the `cuspidal` command.

pub mod report;
pub mod select;
pub mod table;
pub mod verify;

pub use report::{DeltaReport, TorsionReport};
pub use verify::VerifyReport;

/// Output formats shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}
