//! Declarative experiments: a flat config document in, CSV tables, SVG
//! charts and a JSON manifest out.

mod config;
mod output;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, FdOverrides};
pub use output::{line_chart, sanitize, write_atomic, Cell, Series, Table};
pub use run::{
    apply_tol, batch_exit_code, csv_header, run, run_all, run_file, Assertion, Manifest, RunOutcome,
};
