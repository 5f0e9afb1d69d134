//! IO, scans and the command line for `pi01-core`.

pub mod cache;
pub mod checkpoint;
pub mod cli;
pub mod decimal;
pub mod error;
pub mod lab;
pub mod scan;
pub mod selftest;

pub use error::{Error, Result};
