//! Command-line front end for `pcmem-core`: JSON scenario configs, CSV and
//! JSON emission, figure reproduction and closed-form regression.

pub mod classify;
pub mod config;
pub mod error;
pub mod oracles;
pub mod reproduce;
pub mod run;
pub mod table;

pub use error::{CliError, CliResult};
