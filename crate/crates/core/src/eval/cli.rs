use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{aggregate_medians, evaluate_tree, read_rows, write_report, write_rows, ReportFormat, ReportOptions};
use crate::dsp::Encoding;
use crate::error::Result;
use crate::metrics::MetricConfig;
use crate::scene::{load_hrir_database, synthesize_dataset, Split};

#[derive(Debug, Parser)]
#[command(
    name = "binaural-mss",
    version,
    about = "Binaural stem synthesis and spatial separation metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a binaural copy of a stem dataset.
    Synthesize(SynthesizeArgs),
    /// Compute per-stem metrics for estimates against references.
    Evaluate(EvaluateArgs),
    /// Aggregate a metrics file into median tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// Dataset root containing train/ and/or test/.
    #[arg(long)]
    pub musdb: PathBuf,
    /// HRIR directory (azi_<deg>_ele_0.wav files or index.json).
    #[arg(long)]
    pub hrir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Dataset seed; each song's layout seed is derived from it.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "float32", value_parser = parse_encoding)]
    pub encoding: Encoding,
    #[arg(long, default_value = "both", value_parser = parse_split)]
    pub split: Split,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub estimates: PathBuf,
    /// Output metrics CSV, one row per (track, stem).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// ITD frame length in seconds.
    #[arg(long, default_value_t = 0.5)]
    pub itd_frame: f64,
    /// ITD hop in seconds.
    #[arg(long, default_value_t = 0.5)]
    pub itd_hop: f64,
    /// RMS silence threshold for ITD and SSR/SRR frames.
    #[arg(long, default_value_t = 5e-4)]
    pub itd_threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    pub max_lag_ms: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tukey_alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub ssr_window: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ssr_hop: f64,
    /// Delay search range of the SSR/SRR projection, in milliseconds.
    #[arg(long, default_value_t = 1.0)]
    pub proj_max_delay_ms: f64,
}

impl EvaluateArgs {
    pub fn config(&self) -> MetricConfig {
        MetricConfig {
            itd_frame_len: self.itd_frame,
            itd_hop: self.itd_hop,
            tukey_alpha: self.tukey_alpha,
            silence_threshold: self.itd_threshold,
            max_lag: self.max_lag_ms * 1e-3,
            ssr_window: self.ssr_window,
            ssr_hop: self.ssr_hop,
            proj_max_delay: self.proj_max_delay_ms * 1e-3,
            ..MetricConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Metrics CSV written by `evaluate`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    pub format: ReportFormat,
    /// Add per-azimuth-bin distribution statistics.
    #[arg(long)]
    pub by_angle: bool,
    /// Print full precision instead of two decimals.
    #[arg(long)]
    pub full_precision: bool,
}

fn parse_encoding(s: &str) -> std::result::Result<Encoding, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_split(s: &str) -> std::result::Result<Split, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synthesize(a) => {
            let db = load_hrir_database(&a.hrir)?;
            let manifests = synthesize_dataset(&a.musdb, &db, &a.out, a.seed, a.encoding, a.split)?;
            eprintln!("synthesized {} track(s) into {}", manifests.len(), a.out.display());
        }
        Command::Evaluate(a) => {
            let rows = evaluate_tree(&a.reference, &a.estimates, &a.config(), a.jobs)?;
            write_rows(&a.out, &rows)?;
            eprintln!("wrote {} row(s) to {}", rows.len(), a.out.display());
        }
        Command::Report(a) => {
            let rows = read_rows(&a.input)?;
            let report = aggregate_medians(&rows)?;
            let opts = ReportOptions {
                by_angle: a.by_angle,
                full_precision: a.full_precision,
            };
            write_report(&report, a.format, &a.out, opts)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; diagnostics go to stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
