//! Library half of the `duet` command-line tool: configuration parsing and
//! task execution, kept separate from the binary so both the binary and the
//! integration tests drive exactly the same code.

pub mod config;
pub mod tasks;
