use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::MetricValue;
use crate::scene::Stem;

/// The four reported quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Ssr,
    Srr,
    DeltaItd,
    DeltaIld,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Ssr, Metric::Srr, Metric::DeltaItd, Metric::DeltaIld];

    /// Column key, unit included.
    pub fn key(self) -> &'static str {
        match self {
            Metric::Ssr => "ssr_db",
            Metric::Srr => "srr_db",
            Metric::DeltaItd => "delta_itd_us",
            Metric::DeltaIld => "delta_ild_db",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Ssr => "SSR (dB)",
            Metric::Srr => "SRR (dB)",
            Metric::DeltaItd => "ΔITD (µs)",
            Metric::DeltaIld => "ΔILD (dB)",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.key() == s)
            .ok_or_else(|| Error::Format(format!("unknown metric `{s}`")))
    }
}

/// All metrics for one (track, stem).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub track_id: String,
    pub stem: Stem,
    /// Source azimuth from the track manifest; absent for stereo datasets.
    pub azimuth_deg: Option<i32>,
    pub ssr: MetricValue,
    pub srr: MetricValue,
    pub delta_itd_us: MetricValue,
    pub delta_ild_db: MetricValue,
}

impl MetricRow {
    pub fn get(&self, metric: Metric) -> MetricValue {
        match metric {
            Metric::Ssr => self.ssr,
            Metric::Srr => self.srr,
            Metric::DeltaItd => self.delta_itd_us,
            Metric::DeltaIld => self.delta_ild_db,
        }
    }
}

pub const ROWS_HEADER: [&str; 7] = [
    "track_id",
    "stem",
    "azimuth_deg",
    "ssr_db",
    "srr_db",
    "delta_itd_us",
    "delta_ild_db",
];

/// Writes rows at full precision (`inf` for infinite, `n/a` for undefined).
pub fn write_rows(path: impl AsRef<Path>, rows: &[MetricRow]) -> Result<()> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(ROWS_HEADER).map_err(csv_err)?;
    for r in rows {
        let az = r.azimuth_deg.map(|a| a.to_string()).unwrap_or_default();
        w.write_record([
            r.track_id.clone(),
            r.stem.to_string(),
            az,
            r.ssr.to_token(),
            r.srr.to_token(),
            r.delta_itd_us.to_token(),
            r.delta_ild_db.to_token(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_rows(path: impl AsRef<Path>) -> Result<Vec<MetricRow>> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(ROWS_HEADER) {
        return Err(Error::Format(format!(
            "{}: expected header `{}`",
            path.display(),
            ROWS_HEADER.join(",")
        )));
    }
    let bad = |line: usize, what: &str| Error::Format(format!("{}:{line}: bad {what}", path.display()));
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        let value = |col: usize| MetricValue::parse_token(&rec[col]).ok_or_else(|| bad(line, ROWS_HEADER[col]));
        let azimuth_deg = match rec[2].trim() {
            "" => None,
            s => Some(s.parse().map_err(|_| bad(line, "azimuth_deg"))?),
        };
        rows.push(MetricRow {
            track_id: rec[0].to_string(),
            stem: rec[1].parse()?,
            azimuth_deg,
            ssr: value(3)?,
            srr: value(4)?,
            delta_itd_us: value(5)?,
            delta_ild_db: value(6)?,
        });
    }
    Ok(rows)
}
