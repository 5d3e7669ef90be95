//! Front end for the `modhyp` crate: single computations, verification
//! suites with JSON/CSV/text reports, and a report cache for reruns.

pub mod cache;
pub mod commands;
pub mod fixtures;
pub mod report;
pub mod suites;

pub use commands::Format;
pub use report::{Case, VerificationReport};
pub use suites::{Suite, SuiteParams};
