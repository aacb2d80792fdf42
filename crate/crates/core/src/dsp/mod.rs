//! Audio primitives shared by synthesis and evaluation: the sample
//! buffer, WAV I/O, framing and FFT convolution.

mod conv;
mod frame;
mod wav;

pub use conv::fft_convolve;
pub(crate) use frame::FrameLayout;
pub use frame::{frame_signal, rms_weight, tukey, Frame, Window};
pub use wav::{read_wav, write_wav, Encoding};

use crate::error::{Error, Result};

/// Multichannel audio held as 64-bit samples.
///
/// Every channel has the same length, the rate is positive and all
/// samples are finite. Constructors enforce this, so the fields stay
/// private.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    sample_rate: u32,
    channels: Vec<Vec<f64>>,
}

impl AudioBuffer {
    pub fn new(sample_rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidBuffer("sample rate must be positive".into()));
        }
        if channels.is_empty() {
            return Err(Error::InvalidBuffer("buffer has no channels".into()));
        }
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(Error::InvalidBuffer("channels have different lengths".into()));
        }
        if channels.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBuffer("non-finite sample".into()));
        }
        Ok(Self { sample_rate, channels })
    }

    pub fn mono(sample_rate: u32, samples: Vec<f64>) -> Result<Self> {
        Self::new(sample_rate, vec![samples])
    }

    pub fn stereo(sample_rate: u32, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        Self::new(sample_rate, vec![left, right])
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    /// Length in samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_secs(&self) -> f64 {
        self.len() as f64 / self.sample_rate as f64
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.channels[index]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    pub fn peak(&self) -> f64 {
        self.channels.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Multiplies every sample by `gain`.
    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            sample_rate: self.sample_rate,
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|x| x * gain).collect())
                .collect(),
        }
    }

    /// Keeps the first `len` samples of every channel.
    pub fn truncated(&self, len: usize) -> Self {
        Self {
            sample_rate: self.sample_rate,
            channels: self.channels.iter().map(|c| c[..len.min(c.len())].to_vec()).collect(),
        }
    }

    pub(crate) fn require_channels(&self, expected: usize) -> Result<()> {
        if self.num_channels() != expected {
            return Err(Error::ChannelCount {
                expected,
                actual: self.num_channels(),
            });
        }
        Ok(())
    }
}
