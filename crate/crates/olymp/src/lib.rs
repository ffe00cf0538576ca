//! Command-line front end: one subcommand per problem family plus the full
//! acceptance run, all reporting JSON.

pub mod cli;
pub mod report;
pub mod suite;

pub use cli::main_with;
pub use report::{Claim, RunReport, Verdict};
