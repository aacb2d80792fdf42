//! Median tables by instrument and distribution summaries by azimuth.
//!
//! Every cell is a median over per-track values; SSR and SRR per track are
//! already frame medians. The overall column pools every (track, stem)
//! value. Undefined values are left out and counted.

use std::collections::BTreeMap;
use std::fmt;

use super::{Metric, MetricRow};
use crate::error::{Error, Result};
use crate::metrics::{quantile_sorted, sorted_defined, MetricValue};
use crate::scene::Stem;

/// Median of one table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub median: MetricValue,
    /// Values that entered the median.
    pub count: usize,
    /// Undefined values left out.
    pub excluded: usize,
}

impl CellStats {
    pub fn of(values: &[MetricValue]) -> Self {
        let sorted = sorted_defined(values);
        Self {
            median: quantile_sorted(&sorted, 0.5),
            count: sorted.len(),
            excluded: values.len() - sorted.len(),
        }
    }
}

/// Five-number summary (boxplot data).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub count: usize,
    pub excluded: usize,
    pub min: MetricValue,
    pub q1: MetricValue,
    pub median: MetricValue,
    pub q3: MetricValue,
    pub max: MetricValue,
}

impl BoxStats {
    pub fn of(values: &[MetricValue]) -> Self {
        let sorted = sorted_defined(values);
        let q = |p| quantile_sorted(&sorted, p);
        Self {
            count: sorted.len(),
            excluded: values.len() - sorted.len(),
            min: q(0.0),
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: q(1.0),
        }
    }

    pub fn stats(&self) -> [(&'static str, MetricValue); 5] {
        [
            ("min", self.min),
            ("q1", self.q1),
            ("median", self.median),
            ("q3", self.q3),
            ("max", self.max),
        ]
    }
}

/// Per-stem cells (report order: bass, drums, other, vocals) plus the
/// pooled overall cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary<T> {
    pub per_stem: [T; 4],
    pub overall: T,
}

fn summarize<'a, T>(
    rows: impl Iterator<Item = &'a MetricRow> + Clone,
    metric: Metric,
    stat: impl Fn(&[MetricValue]) -> T,
) -> Summary<T> {
    let per_stem = Stem::REPORT_ORDER.map(|stem| {
        let v: Vec<MetricValue> = rows.clone().filter(|r| r.stem == stem).map(|r| r.get(metric)).collect();
        stat(&v)
    });
    let all: Vec<MetricValue> = rows.map(|r| r.get(metric)).collect();
    Summary {
        per_stem,
        overall: stat(&all),
    }
}

/// Half-open 30 degree azimuth bin; the top bin also holds +90.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AngleBin {
    pub lo: i32,
    pub hi: i32,
}

impl AngleBin {
    pub const ALL: [AngleBin; 6] = [
        AngleBin { lo: -90, hi: -60 },
        AngleBin { lo: -60, hi: -30 },
        AngleBin { lo: -30, hi: 0 },
        AngleBin { lo: 0, hi: 30 },
        AngleBin { lo: 30, hi: 60 },
        AngleBin { lo: 60, hi: 90 },
    ];

    pub fn of(azimuth: i32) -> Option<AngleBin> {
        if !(-90..=90).contains(&azimuth) {
            return None;
        }
        AngleBin::ALL
            .into_iter()
            .find(|b| azimuth >= b.lo && (azimuth < b.hi || (b.hi == 90 && azimuth == 90)))
    }
}

impl fmt::Display for AngleBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.hi == 90 { ']' } else { ')' };
        write!(f, "[{},{}{close}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleBinStats {
    pub bin: AngleBin,
    pub rows: usize,
    pub metrics: BTreeMap<Metric, Summary<BoxStats>>,
}

/// Rows grouped by azimuth bin. The second value counts rows that carry
/// no usable azimuth and were skipped.
pub fn bin_by_angle(rows: &[MetricRow]) -> (Vec<AngleBinStats>, usize) {
    let skipped = rows
        .iter()
        .filter(|r| r.azimuth_deg.and_then(AngleBin::of).is_none())
        .count();
    if skipped > 0 {
        log::warn!("{skipped} row(s) without a valid azimuth left out of the angle bins");
    }
    let bins = AngleBin::ALL
        .into_iter()
        .map(|bin| {
            let in_bin = rows
                .iter()
                .filter(move |r| r.azimuth_deg.and_then(AngleBin::of) == Some(bin));
            let metrics = Metric::ALL
                .into_iter()
                .map(|m| (m, summarize(in_bin.clone(), m, BoxStats::of)))
                .collect();
            AngleBinStats {
                bin,
                rows: in_bin.count(),
                metrics,
            }
        })
        .collect();
    (bins, skipped)
}

/// Aggregated view of a set of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub rows: Vec<MetricRow>,
    pub by_instrument: BTreeMap<Metric, Summary<CellStats>>,
    pub by_angle_bin: Vec<AngleBinStats>,
    pub rows_without_azimuth: usize,
}

impl MetricReport {
    pub fn overall(&self, metric: Metric) -> CellStats {
        self.by_instrument[&metric].overall
    }

    pub fn cell(&self, metric: Metric, stem: Stem) -> CellStats {
        let i = Stem::REPORT_ORDER
            .iter()
            .position(|s| *s == stem)
            .expect("stem in report order");
        self.by_instrument[&metric].per_stem[i]
    }
}

pub fn aggregate_medians(rows: &[MetricRow]) -> Result<MetricReport> {
    if rows.is_empty() {
        return Err(Error::NoRows);
    }
    let by_instrument = Metric::ALL
        .into_iter()
        .map(|m| (m, summarize(rows.iter(), m, CellStats::of)))
        .collect();
    let (by_angle_bin, rows_without_azimuth) = bin_by_angle(rows);
    Ok(MetricReport {
        rows: rows.to_vec(),
        by_instrument,
        by_angle_bin,
        rows_without_azimuth,
    })
}
