//! Experiment runner: configuration, the comparison protocol over all
//! methods, CSV output and SVG plots.

mod config;
mod plot;
mod run;
mod table;

pub use config::{merge_settings, parse_kv, ErrorReport, ExperimentConfig, Method, KEYS, ORACLE_CAP_ENV};
pub use plot::{emit_svg_plot, median_curves, svg_plot};
pub use run::{build_source, reference_svd, run_experiment, run_on, Source};
pub use table::{emit_csv, parse_csv, to_csv, Row, CSV_HEADER};
