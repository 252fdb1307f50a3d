//! Library side of the command-line front end; `main` is a thin wrapper so
//! the whole workflow stays testable in-process.

pub mod commands;
pub mod config;
pub mod external;
pub mod manifest;
pub mod plot;

pub use commands::{cmd_check, cmd_estimate, cmd_plot, cmd_sample, cmd_summary};
pub use config::RunConfig;

/// Stable exit codes: 0 ok/clear, 1 usage or config error, 2 the estimate
/// intersects the unsafe set (or a goal clause fails), 3 unknown, 4 runtime
/// failure.
pub mod exit_codes {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INTERSECTS: i32 = 2;
    pub const UNKNOWN: i32 = 3;
    pub const RUNTIME: i32 = 4;
}
