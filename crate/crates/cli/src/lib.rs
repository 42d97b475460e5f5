//! Configuration, output and command execution for the `deltalwi` binary.

pub mod config;
pub mod output;
pub mod plot;
pub mod run;

pub use config::{parse_config, parse_phase, Command, ConfigError, Entries, RunConfig};
pub use output::{read_csv_table, write_spectrum, Format, Table};
pub use plot::emit_plot_script;
pub use run::{execute, run, Report};
