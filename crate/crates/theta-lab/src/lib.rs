//! Verification driver for the theta-function line-bundle laboratory.
//!
//! The library half of the CLI: run configuration, the verification suites,
//! machine-readable reports, and CSV dumps. The binary in `main.rs` is a
//! thin argument-parsing layer over [`suites::run`].

pub mod config;
pub mod dump;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use report::VerificationReport;
