use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use serde::{Deserialize, Serialize};

use super::AudioBuffer;
use crate::error::{Error, Result};

/// On-disk sample encoding for written WAV files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Pcm16,
    #[default]
    Float32,
}

impl std::str::FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pcm16" => Ok(Encoding::Pcm16),
            "float32" => Ok(Encoding::Float32),
            other => Err(Error::Config(format!("unknown encoding `{other}`"))),
        }
    }
}

/// Reads a PCM-16, PCM-24 or float-32 WAV file.
///
/// Integer samples are scaled by `2^-(bits-1)`, so they land in `[-1, 1)`.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let wav_err = |source| Error::Wav {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = WavReader::open(path).map_err(wav_err)?;
    let spec = reader.spec();
    let num_channels = spec.channels as usize;
    if num_channels == 0 {
        return Err(Error::UnsupportedCodec {
            path: path.to_path_buf(),
            detail: "zero channels".into(),
        });
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, bits @ (16 | 24)) => {
            let scale = 1.0 / (1_i64 << (bits - 1)) as f64;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<Result<_, _>>()
                .map_err(wav_err)?
        }
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()
            .map_err(wav_err)?,
        (format, bits) => {
            return Err(Error::UnsupportedCodec {
                path: path.to_path_buf(),
                detail: format!("{format:?} {bits}-bit"),
            })
        }
    };
    if interleaved.is_empty() {
        return Err(Error::EmptyAudio(path.to_path_buf()));
    }

    let frames = interleaved.len() / num_channels;
    let mut channels = vec![Vec::with_capacity(frames); num_channels];
    for frame in interleaved.chunks_exact(num_channels) {
        for (ch, &x) in channels.iter_mut().zip(frame) {
            ch.push(x);
        }
    }
    AudioBuffer::new(spec.sample_rate, channels).map_err(|e| match e {
        Error::InvalidBuffer(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes `buffer` to `path`.
///
/// PCM-16 output clips samples outside `[-1, 1]`; the number of clipped
/// samples is returned (and logged). Float-32 output never clips.
pub fn write_wav(path: impl AsRef<Path>, buffer: &AudioBuffer, encoding: Encoding) -> Result<usize> {
    let path = path.as_ref();
    if buffer.is_empty() {
        return Err(Error::EmptyAudio(path.to_path_buf()));
    }
    let spec = WavSpec {
        channels: buffer.num_channels() as u16,
        sample_rate: buffer.sample_rate(),
        bits_per_sample: match encoding {
            Encoding::Pcm16 => 16,
            Encoding::Float32 => 32,
        },
        sample_format: match encoding {
            Encoding::Pcm16 => SampleFormat::Int,
            Encoding::Float32 => SampleFormat::Float,
        },
    };
    let wav_err = |source| Error::Wav {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = WavWriter::create(path, spec).map_err(wav_err)?;
    let mut clipped = 0usize;
    for k in 0..buffer.len() {
        for ch in buffer.channels() {
            let x = ch[k];
            match encoding {
                Encoding::Float32 => writer.write_sample(x as f32).map_err(wav_err)?,
                Encoding::Pcm16 => {
                    if x.abs() > 1.0 {
                        clipped += 1;
                    }
                    let code = (x * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                    writer.write_sample(code).map_err(wav_err)?;
                }
            }
        }
    }
    writer.finalize().map_err(wav_err)?;
    if clipped > 0 {
        log::warn!(
            "{}: clipped {clipped} sample(s) outside [-1, 1] in 16-bit output",
            path.display()
        );
    }
    Ok(clipped)
}
