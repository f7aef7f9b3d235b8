//! Config loading, file formats and the command-line front end for
//! [`pinchip_core`].

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod golden;
pub mod report;
pub mod sweep;
pub mod units;

pub use error::{CliError, Result};
