//! Files, reports, sample inputs and verification suites on top of
//! `ratimm-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod parallel;
pub mod samples;
pub mod verify;
