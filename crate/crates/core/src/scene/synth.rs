use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_layout, song_seed, HrirDatabase, HrirPair, SceneLayout, Stem};
use crate::dsp::{fft_convolve, read_wav, write_wav, AudioBuffer, Encoding};
use crate::error::{Error, Result};

/// Peak level the mixture is brought down to when it would exceed it.
pub const MIX_PEAK: f64 = 0.99;

pub const MANIFEST_FILE: &str = "layout.json";
pub const MIXTURE_FILE: &str = "mixture.wav";

/// Averages the two channels of a stereo buffer.
pub fn downmix_mono(stereo: &AudioBuffer) -> Result<AudioBuffer> {
    stereo.require_channels(2)?;
    let mono = stereo
        .channel(0)
        .iter()
        .zip(stereo.channel(1))
        .map(|(l, r)| (l + r) / 2.0)
        .collect();
    AudioBuffer::mono(stereo.sample_rate(), mono)
}

/// Convolves a mono signal with each ear's impulse response.
///
/// The output keeps the full `N + L - 1` convolution tail.
pub fn binauralize(mono: &AudioBuffer, hrir: &HrirPair) -> Result<AudioBuffer> {
    mono.require_channels(1)?;
    if mono.sample_rate() != hrir.sample_rate {
        return Err(Error::SampleRateMismatch {
            expected: hrir.sample_rate,
            actual: mono.sample_rate(),
        });
    }
    let x = mono.channel(0);
    let (left, right) = rayon::join(|| fft_convolve(x, &hrir.left), || fft_convolve(x, &hrir.right));
    AudioBuffer::stereo(mono.sample_rate(), left, right)
}

/// Sum of binaural stems, peak-limited by one common gain.
#[derive(Debug, Clone)]
pub struct Mixture {
    pub mixture: AudioBuffer,
    pub gain: f64,
    /// Input stems times `gain`; they sum to `mixture`.
    pub scaled_stems: Vec<AudioBuffer>,
}

/// Sums the stems and, if the peak exceeds [`MIX_PEAK`], scales mixture and
/// stems alike so the mixture peaks at exactly that level.
pub fn mix_and_normalize(stems: &[AudioBuffer]) -> Result<Mixture> {
    let first = stems
        .first()
        .ok_or_else(|| Error::InvalidBuffer("no stems to mix".into()))?;
    for s in stems {
        if s.len() != first.len() || s.num_channels() != first.num_channels() {
            return Err(Error::LengthMismatch(format!(
                "stems have shapes {}x{} and {}x{}",
                first.num_channels(),
                first.len(),
                s.num_channels(),
                s.len()
            )));
        }
        if s.sample_rate() != first.sample_rate() {
            return Err(Error::SampleRateMismatch {
                expected: first.sample_rate(),
                actual: s.sample_rate(),
            });
        }
    }
    let peak = raw_sum(stems).iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    let gain = if peak > MIX_PEAK { MIX_PEAK / peak } else { 1.0 };
    let scaled_stems: Vec<AudioBuffer> = stems.iter().map(|s| s.scaled(gain)).collect();
    // summing the scaled stems keeps mixture == sum(stems) exact
    let mixture = AudioBuffer::new(first.sample_rate(), raw_sum(&scaled_stems))?;
    Ok(Mixture {
        mixture,
        gain,
        scaled_stems,
    })
}

fn raw_sum(stems: &[AudioBuffer]) -> Vec<Vec<f64>> {
    let mut acc = stems[0].channels().to_vec();
    for s in &stems[1..] {
        for (a, c) in acc.iter_mut().zip(s.channels()) {
            for (x, y) in a.iter_mut().zip(c) {
                *x += y;
            }
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemPlacement {
    pub azimuth_deg: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestStems {
    pub vocals: StemPlacement,
    pub bass: StemPlacement,
    pub drums: StemPlacement,
    pub other: StemPlacement,
}

/// Provenance of one synthesized track, stored as `layout.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub song_id: String,
    pub seed: u64,
    pub hrtf_subject: String,
    pub sample_rate: u32,
    pub normalization_gain: f64,
    pub stems: ManifestStems,
}

impl Manifest {
    pub fn azimuth(&self, stem: Stem) -> i32 {
        match stem {
            Stem::Vocals => self.stems.vocals.azimuth_deg,
            Stem::Bass => self.stems.bass.azimuth_deg,
            Stem::Drums => self.stems.drums.azimuth_deg,
            Stem::Other => self.stems.other.azimuth_deg,
        }
    }

    pub fn layout(&self) -> SceneLayout {
        SceneLayout {
            assignments: Stem::ALL.map(|s| (s, self.azimuth(s))),
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.normalization_gain.is_nan() || self.normalization_gain <= 0.0 {
            return Err(Error::Format(format!(
                "manifest {}: normalization_gain must be positive",
                self.song_id
            )));
        }
        self.layout().validate()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: Manifest = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        m.validate()?;
        Ok(m)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

fn read_stem(dir: &Path, stem: Stem) -> Result<AudioBuffer> {
    let path = dir.join(stem.file_name());
    if !path.is_file() {
        return Err(Error::MissingStem {
            stem: stem.name().into(),
            dir: dir.to_path_buf(),
        });
    }
    read_wav(path)
}

/// Renders one track: each stem is downmixed, convolved with the HRIR at
/// its layout azimuth, and the results are mixed and normalized. Writes the
/// four scaled stems, `mixture.wav` and `layout.json` into `out_dir`.
pub fn synthesize_track(
    track_dir: impl AsRef<Path>,
    db: &HrirDatabase,
    layout: &SceneLayout,
    out_dir: impl AsRef<Path>,
    encoding: Encoding,
) -> Result<Manifest> {
    let track_dir = track_dir.as_ref();
    let out_dir = out_dir.as_ref();
    layout.validate()?;
    let song_id = track_dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();

    let sources = Stem::ALL
        .iter()
        .map(|&s| read_stem(track_dir, s))
        .collect::<Result<Vec<_>>>()?;
    let len = sources[0].len();
    if let Some(s) = sources.iter().position(|b| b.len() != len) {
        return Err(Error::LengthMismatch(format!(
            "{}: {} has {} samples, vocals has {len}",
            track_dir.display(),
            Stem::ALL[s],
            sources[s].len()
        )));
    }

    let binaural = Stem::ALL
        .iter()
        .zip(&sources)
        .map(|(&stem, src)| {
            let az = layout.azimuth(stem);
            let hrir = db.get(az).ok_or_else(|| Error::MissingAngle {
                dir: PathBuf::from(db.subject_id()),
                azimuth: az,
            })?;
            binauralize(&downmix_mono(src)?, hrir)
        })
        .collect::<Result<Vec<_>>>()?;
    let mix = mix_and_normalize(&binaural)?;

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for (stem, buf) in Stem::ALL.iter().zip(&mix.scaled_stems) {
        write_wav(out_dir.join(stem.file_name()), buf, encoding)?;
    }
    write_wav(out_dir.join(MIXTURE_FILE), &mix.mixture, encoding)?;

    let manifest = Manifest {
        song_id,
        seed: layout.seed,
        hrtf_subject: db.subject_id().to_string(),
        sample_rate: mix.mixture.sample_rate(),
        normalization_gain: mix.gain,
        stems: ManifestStems {
            vocals: StemPlacement {
                azimuth_deg: layout.azimuth(Stem::Vocals),
            },
            bass: StemPlacement {
                azimuth_deg: layout.azimuth(Stem::Bass),
            },
            drums: StemPlacement {
                azimuth_deg: layout.azimuth(Stem::Drums),
            },
            other: StemPlacement {
                azimuth_deg: layout.azimuth(Stem::Other),
            },
        },
    };
    manifest.write(out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

/// Dataset partitions to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Split {
    Train,
    Test,
    #[default]
    Both,
}

impl Split {
    fn dirs(self) -> &'static [&'static str] {
        match self {
            Split::Train => &["train"],
            Split::Test => &["test"],
            Split::Both => &["train", "test"],
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            "both" => Ok(Split::Both),
            other => Err(Error::Config(format!("unknown split `{other}`"))),
        }
    }
}

/// Song directories under `<root>/<split>/`, sorted by path.
pub fn song_dirs(root: &Path, split: Split) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    let mut found_split = false;
    for name in split.dirs() {
        let dir = root.join(name);
        if !dir.is_dir() {
            if split != Split::Both {
                return Err(Error::Format(format!("{} is not a directory", dir.display())));
            }
            continue;
        }
        found_split = true;
        let mut songs: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        songs.sort();
        out.extend(songs.into_iter().map(|p| (name.to_string(), p)));
    }
    if !found_split {
        return Err(Error::Format(format!(
            "{} has neither train/ nor test/",
            root.display()
        )));
    }
    Ok(out)
}

/// Renders every song of a stem dataset laid out as
/// `<root>/{train,test}/<song>/{vocals,bass,drums,other}.wav` into the same
/// layout under `out_root`. Each song's layout comes from
/// [`song_seed`]`(master_seed, song)`.
pub fn synthesize_dataset(
    root: impl AsRef<Path>,
    db: &HrirDatabase,
    out_root: impl AsRef<Path>,
    master_seed: u64,
    encoding: Encoding,
    split: Split,
) -> Result<Vec<Manifest>> {
    let root = root.as_ref();
    let out_root = out_root.as_ref();
    let songs = song_dirs(root, split)?;
    songs
        .par_iter()
        .map(|(split_name, dir)| {
            let song = dir.file_name().unwrap_or_default().to_string_lossy().into_owned();
            let layout = sample_layout(song_seed(master_seed, &song));
            let out = out_root.join(split_name).join(&song);
            log::info!("synthesizing {split_name}/{song}");
            synthesize_track(dir, db, &layout, out, encoding)
        })
        .collect()
}
