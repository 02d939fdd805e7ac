//! Command-line campaigns: argument parsing, battery loading, report and CSV output.

mod args;
mod battery;
mod run;

pub use args::{CampaignConfig, Command, Common, Output, REPORT_DIR_ENV};
pub use battery::{load_battery, load_symbol, parse_random_spec, LoadedMap};
pub use run::{main_with_args, report_path, run, write_csv, CliReport, Outcome};
