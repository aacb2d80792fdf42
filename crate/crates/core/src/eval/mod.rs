//! Batch evaluation: per-stem metric rows, median aggregation, reports and
//! the command-line front end.

mod aggregate;
pub mod cli;
mod evaluate;
mod report;
mod rows;

pub use aggregate::{
    aggregate_medians, bin_by_angle, AngleBin, AngleBinStats, BoxStats, CellStats, MetricReport, Summary,
};
pub use evaluate::{evaluate_track, evaluate_tree, find_tracks};
pub use report::{render_csv, render_markdown, write_report, ReportFormat, ReportOptions, REPORT_HEADER};
pub use rows::{read_rows, write_rows, Metric, MetricRow, ROWS_HEADER};
