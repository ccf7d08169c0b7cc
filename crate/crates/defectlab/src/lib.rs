//! File formats, report rendering and the command-line front end for
//! `defectlab-core`.

pub mod bundled;
pub mod cli;
pub mod error;
pub mod groupcalc;
pub mod report;
pub mod run;
pub mod specfile;

pub use error::{CliError, Result};
pub use run::{exit_code, render, run_spec, Format, Precision, RunConfig};
pub use specfile::SpecFile;
