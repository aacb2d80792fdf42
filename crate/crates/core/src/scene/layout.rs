use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GRID_AZIMUTHS;
use crate::error::{Error, Result};

/// The four source categories of a track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stem {
    Vocals,
    Bass,
    Drums,
    Other,
}

impl Stem {
    /// Placement order.
    pub const ALL: [Stem; 4] = [Stem::Vocals, Stem::Bass, Stem::Drums, Stem::Other];
    /// Column order in reports.
    pub const REPORT_ORDER: [Stem; 4] = [Stem::Bass, Stem::Drums, Stem::Other, Stem::Vocals];

    pub fn name(self) -> &'static str {
        match self {
            Stem::Vocals => "vocals",
            Stem::Bass => "bass",
            Stem::Drums => "drums",
            Stem::Other => "other",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.wav", self.name())
    }
}

impl fmt::Display for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stem::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown stem `{s}`")))
    }
}

/// Azimuths of the four stems of one track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneLayout {
    /// In placement order: vocals, bass, drums, other.
    pub assignments: [(Stem, i32); 4],
    pub seed: u64,
}

impl SceneLayout {
    pub fn azimuth(&self, stem: Stem) -> i32 {
        self.assignments
            .iter()
            .find(|(s, _)| *s == stem)
            .map(|&(_, az)| az)
            .expect("layout holds every stem")
    }

    /// Checks that the azimuths are distinct grid angles.
    pub fn validate(&self) -> Result<()> {
        for (i, (stem, az)) in self.assignments.iter().enumerate() {
            if *stem != Stem::ALL[i] {
                return Err(Error::Format(format!(
                    "layout stem {i} is {stem}, expected {}",
                    Stem::ALL[i]
                )));
            }
            if !super::is_grid_azimuth(*az) {
                return Err(Error::Format(format!("{stem} azimuth {az} is off the grid")));
            }
            if self.assignments[..i].iter().any(|(_, other)| other == az) {
                return Err(Error::Format(format!("two stems share azimuth {az}")));
            }
        }
        Ok(())
    }
}

/// Draws four distinct grid azimuths, assigned to vocals, bass, drums and
/// other in that order. The same seed always gives the same layout.
pub fn sample_layout(seed: u64) -> SceneLayout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = GRID_AZIMUTHS;
    // partial Fisher-Yates: the first four slots are the draws in order
    for i in 0..Stem::ALL.len() {
        let j = rng.random_range(i..grid.len());
        grid.swap(i, j);
    }
    SceneLayout {
        assignments: [
            (Stem::Vocals, grid[0]),
            (Stem::Bass, grid[1]),
            (Stem::Drums, grid[2]),
            (Stem::Other, grid[3]),
        ],
        seed,
    }
}

/// Per-song seed derived from the dataset seed and the song id, so layouts
/// do not depend on processing order. Kept below 2^53 so it survives
/// JSON readers that use doubles.
pub fn song_seed(master_seed: u64, song_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(song_id.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes) & ((1 << 53) - 1)
}
