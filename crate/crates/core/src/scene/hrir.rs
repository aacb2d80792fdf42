use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dsp::read_wav;
use crate::error::{Error, Result};

/// Azimuth grid in degrees: -90, -80, ..., +90.
pub const GRID_AZIMUTHS: [i32; 19] = [
    -90, -80, -70, -60, -50, -40, -30, -20, -10, 0, 10, 20, 30, 40, 50, 60, 70, 80, 90,
];

/// Sample rate of the source dataset and of every HRIR.
pub const DATASET_SAMPLE_RATE: u32 = 44100;

pub fn is_grid_azimuth(azimuth: i32) -> bool {
    (-90..=90).contains(&azimuth) && azimuth % 10 == 0
}

/// Left/right impulse responses for one direction on the horizontal plane.
#[derive(Debug, Clone, PartialEq)]
pub struct HrirPair {
    pub azimuth: i32,
    pub elevation: i32,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub sample_rate: u32,
}

impl HrirPair {
    pub fn new(azimuth: i32, left: Vec<f64>, right: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if !is_grid_azimuth(azimuth) {
            return Err(Error::Config(format!(
                "azimuth {azimuth} is not a multiple of 10 in [-90, 90]"
            )));
        }
        if left.is_empty() || left.len() != right.len() {
            return Err(Error::InvalidBuffer(format!(
                "HRIR at {azimuth} deg: left/right lengths {} and {}",
                left.len(),
                right.len()
            )));
        }
        Ok(Self {
            azimuth,
            elevation: 0,
            left,
            right,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }
}

/// One subject's HRIRs, one pair per grid azimuth.
#[derive(Debug, Clone)]
pub struct HrirDatabase {
    subject_id: String,
    entries: BTreeMap<i32, HrirPair>,
}

impl HrirDatabase {
    /// Builds a database from pairs covering the whole grid exactly once.
    pub fn from_pairs(subject_id: impl Into<String>, pairs: Vec<HrirPair>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for p in pairs {
            let az = p.azimuth;
            if entries.insert(az, p).is_some() {
                return Err(Error::Config(format!("duplicate HRIR for azimuth {az}")));
            }
        }
        if let Some(&az) = GRID_AZIMUTHS.iter().find(|a| !entries.contains_key(a)) {
            return Err(Error::Config(format!("no HRIR for azimuth {az}")));
        }
        let rates: Vec<u32> = entries.values().map(|p| p.sample_rate).collect();
        if rates.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Config("HRIRs have differing sample rates".into()));
        }
        let lens: Vec<usize> = entries.values().map(HrirPair::len).collect();
        if lens.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Config("HRIRs have differing lengths".into()));
        }
        Ok(Self {
            subject_id: subject_id.into(),
            entries,
        })
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    pub fn get(&self, azimuth: i32) -> Option<&HrirPair> {
        self.entries.get(&azimuth)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sample_rate(&self) -> u32 {
        self.entries.values().next().map_or(0, |p| p.sample_rate)
    }

    pub fn iter(&self) -> impl Iterator<Item = &HrirPair> {
        self.entries.values()
    }
}

/// File name used for an azimuth when no `index.json` is present.
pub fn hrir_file_name(azimuth: i32) -> String {
    format!("azi_{azimuth}_ele_0.wav")
}

/// Loads `azi_<deg>_ele_0.wav` files for every grid azimuth from `dir`,
/// requiring 44.1 kHz stereo files.
///
/// When `dir/index.json` exists it maps azimuth strings to file names
/// instead (`{"-90": "left.wav", ...}`), with an optional `"subject"` key.
/// The subject id defaults to the directory name.
pub fn load_hrir_database(dir: impl AsRef<Path>) -> Result<HrirDatabase> {
    load_hrir_database_at(dir, DATASET_SAMPLE_RATE)
}

pub fn load_hrir_database_at(dir: impl AsRef<Path>, sample_rate: u32) -> Result<HrirDatabase> {
    let dir = dir.as_ref();
    let (subject, files) = index_files(dir)?;
    let mut pairs = Vec::with_capacity(GRID_AZIMUTHS.len());
    for az in GRID_AZIMUTHS {
        let path = match files.get(&az) {
            Some(p) => p.clone(),
            None => {
                return Err(Error::MissingAngle {
                    dir: dir.to_path_buf(),
                    azimuth: az,
                })
            }
        };
        if !path.is_file() {
            return Err(Error::MissingAngle {
                dir: dir.to_path_buf(),
                azimuth: az,
            });
        }
        let buf = read_wav(&path)?;
        if buf.sample_rate() != sample_rate {
            return Err(Error::SampleRateMismatch {
                expected: sample_rate,
                actual: buf.sample_rate(),
            });
        }
        if buf.num_channels() != 2 {
            return Err(Error::Format(format!(
                "{}: HRIR must be stereo, found {} channel(s)",
                path.display(),
                buf.num_channels()
            )));
        }
        let mut ch = buf.into_channels();
        let right = ch.pop().unwrap_or_default();
        let left = ch.pop().unwrap_or_default();
        pairs.push(HrirPair::new(az, left, right, sample_rate)?);
    }
    let subject = subject.unwrap_or_else(|| {
        dir.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    HrirDatabase::from_pairs(subject, pairs)
}

fn index_files(dir: &Path) -> Result<(Option<String>, BTreeMap<i32, PathBuf>)> {
    let index = dir.join("index.json");
    if !index.is_file() {
        let files = GRID_AZIMUTHS
            .iter()
            .map(|&az| (az, dir.join(hrir_file_name(az))))
            .collect();
        return Ok((None, files));
    }
    let text = fs::read_to_string(&index).map_err(|e| Error::io(&index, e))?;
    let map: BTreeMap<String, String> = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: index.clone(),
        source,
    })?;
    let mut subject = None;
    let mut files = BTreeMap::new();
    for (key, value) in map {
        if key == "subject" {
            subject = Some(value);
            continue;
        }
        let az: i32 = key
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("{}: bad azimuth key `{key}`", index.display())))?;
        files.insert(az, dir.join(value));
    }
    Ok((subject, files))
}
