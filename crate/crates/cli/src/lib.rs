//! Library side of the `betaskel` command-line tool: file formats, the
//! experiment harness, and SVG output.

pub mod error;
pub mod experiment;
pub mod io;
pub mod render;

pub use error::CliError;
