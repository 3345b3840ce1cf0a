//! Front end for the `lmg` binary: configuration, table I/O, traces, sweeps,
//! figure data and the validation report.

pub mod config;
pub mod error;
pub mod io;
pub mod run;
pub mod validate;

pub use config::{ConfigFile, Format, Grid, RunConfig};
pub use error::{CliError, CliResult};
pub use io::Table;
pub use run::{run_figure, run_sweep, run_trace, Figure, FigureData};
pub use validate::{run_validate, ValidationReport, ValidationRow};
