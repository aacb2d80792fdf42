use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::aggregate::{BoxStats, CellStats, MetricReport};
use super::Metric;
use crate::error::{Error, Result};
use crate::metrics::MetricValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::Config(format!("unknown report format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    pub by_angle: bool,
    pub full_precision: bool,
}

pub const REPORT_HEADER: [&str; 7] = ["group", "metric", "bass", "drums", "other", "vocals", "overall"];

const AGGREGATION_NOTE: &str = "Cells are medians of per-track values (per-track SSR/SRR are \
frame medians); the overall column pools every (track, stem) value. Undefined values are \
excluded and counted.";

fn number(v: MetricValue, excluded: usize, full: bool) -> String {
    match v {
        MetricValue::Finite(x) if full => format!("{x}"),
        MetricValue::Finite(x) => {
            let s = format!("{x:.2}");
            // no "-0.00"
            if s == "-0.00" {
                "0.00".into()
            } else {
                s
            }
        }
        MetricValue::Infinite => "inf".into(),
        MetricValue::Undefined => format!("n/a ({excluded} excluded)"),
    }
}

fn cell(c: &CellStats, full: bool) -> String {
    number(c.median, c.excluded, full)
}

/// Renders the report as CSV text with header
/// `group,metric,bass,drums,other,vocals,overall`.
///
/// Group `all` holds the per-instrument medians and, as `<metric>.excluded`,
/// the number of undefined values left out. With `by_angle`, each azimuth
/// bin adds `<metric>.{count,min,q1,median,q3,max}` rows.
pub fn render_csv(report: &MetricReport, opts: ReportOptions) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |rec: Vec<String>| w.write_record(&rec).map_err(|e| Error::Format(e.to_string()));
    put(REPORT_HEADER.iter().map(|s| s.to_string()).collect())?;
    for m in Metric::ALL {
        let s = &report.by_instrument[&m];
        let mut rec = vec!["all".to_string(), m.key().to_string()];
        rec.extend(s.per_stem.iter().map(|c| cell(c, opts.full_precision)));
        rec.push(cell(&s.overall, opts.full_precision));
        put(rec)?;
        let mut rec = vec!["all".to_string(), format!("{}.excluded", m.key())];
        rec.extend(s.per_stem.iter().map(|c| c.excluded.to_string()));
        rec.push(s.overall.excluded.to_string());
        put(rec)?;
    }
    if opts.by_angle {
        for bin in &report.by_angle_bin {
            for m in Metric::ALL {
                let s = &bin.metrics[&m];
                let group = bin.bin.to_string();
                let mut rec = vec![group.clone(), format!("{}.count", m.key())];
                rec.extend(s.per_stem.iter().map(|b| b.count.to_string()));
                rec.push(s.overall.count.to_string());
                put(rec)?;
                for (i, (name, _)) in s.overall.stats().iter().enumerate() {
                    let pick = |b: &BoxStats| number(b.stats()[i].1, b.excluded, opts.full_precision);
                    let mut rec = vec![group.clone(), format!("{}.{name}", m.key())];
                    rec.extend(s.per_stem.iter().map(pick));
                    rec.push(pick(&s.overall));
                    put(rec)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Renders Markdown tables: metrics by instrument, and optionally the
/// pooled distribution of each metric per azimuth bin.
pub fn render_markdown(report: &MetricReport, opts: ReportOptions) -> String {
    let full = opts.full_precision;
    let mut out = String::new();
    let _ = writeln!(out, "# Spatial metrics\n");
    let _ = writeln!(out, "{AGGREGATION_NOTE} Rows: {}.\n", report.rows.len());
    let _ = writeln!(out, "| Metric | Bass | Drums | Other | Vocals | Overall |");
    let _ = writeln!(out, "|---|---:|---:|---:|---:|---:|");
    for m in Metric::ALL {
        let s = &report.by_instrument[&m];
        let cells: Vec<String> = s.per_stem.iter().map(|c| cell(c, full)).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            m.label(),
            cells.join(" | "),
            cell(&s.overall, full)
        );
    }
    if opts.by_angle {
        let _ = writeln!(out, "\n## By azimuth (all sources)\n");
        if report.rows_without_azimuth > 0 {
            let _ = writeln!(
                out,
                "{} row(s) without azimuth were left out.\n",
                report.rows_without_azimuth
            );
        }
        for m in Metric::ALL {
            let _ = writeln!(out, "### {}\n", m.label());
            let _ = writeln!(out, "| Azimuth | n | Min | Q1 | Median | Q3 | Max |");
            let _ = writeln!(out, "|---|---:|---:|---:|---:|---:|---:|");
            for bin in &report.by_angle_bin {
                let b = &bin.metrics[&m].overall;
                let stats: Vec<String> = b.stats().iter().map(|(_, v)| number(*v, b.excluded, full)).collect();
                let _ = writeln!(out, "| {} | {} | {} |", bin.bin, b.count, stats.join(" | "));
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_report(
    report: &MetricReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
    opts: ReportOptions,
) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::NoRows);
    }
    let text = match format {
        ReportFormat::Csv => render_csv(report, opts)?,
        ReportFormat::Markdown => render_markdown(report, opts),
    };
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
