//! Configuration-driven experiment runner for the `zerolab` library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod runner;

use zerolab::Error;

pub use config::ExperimentConfig;
pub use runner::{RunSummary, Runner};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } | Error::Range { .. } => EXIT_CAPACITY,
        Error::Numeric(_) | Error::OnContourZero { .. } => EXIT_NUMERIC,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}
