//! Library side of the `eqkit` command line: config parsing, the game
//! registry, the run orchestrator, and report/CSV emission.

pub mod config;
pub mod csv;
pub mod registry;
pub mod report;
pub mod run;

pub use config::{parse_config, Analysis, CliError, NumericSettings, RunConfig};
pub use csv::{available_csvs, emit_csv, render_csv, CsvKind};
pub use report::{AnalysisOutcome, AnalysisRecord, AnalysisResult, RunReport};
pub use run::run;
