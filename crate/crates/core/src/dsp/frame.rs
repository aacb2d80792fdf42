use std::f64::consts::PI;

use super::AudioBuffer;
use crate::error::{Error, Result};

/// Taper applied to each frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Rectangular,
    /// Tapered cosine; the parameter is the tapered fraction in `[0, 1]`.
    Tukey(f64),
}

impl Window {
    fn coefficients(self, len: usize) -> Option<Vec<f64>> {
        match self {
            Window::Rectangular => None,
            Window::Tukey(alpha) => Some(tukey(len, alpha)),
        }
    }
}

/// Symmetric Tukey window of `len` points (same definition as
/// `scipy.signal.windows.tukey(len, alpha, sym=True)`).
pub fn tukey(len: usize, alpha: f64) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    if alpha <= 0.0 {
        return vec![1.0; len];
    }
    let alpha = alpha.min(1.0);
    let m = (len - 1) as f64;
    (0..len)
        .map(|i| {
            let x = i as f64 / m;
            if x < alpha / 2.0 {
                0.5 * (1.0 + (2.0 * PI / alpha * (x - alpha / 2.0)).cos())
            } else if x > 1.0 - alpha / 2.0 {
                0.5 * (1.0 + (2.0 * PI / alpha * (x - 1.0 + alpha / 2.0)).cos())
            } else {
                1.0
            }
        })
        .collect()
}

/// One analysis frame of a multichannel signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub index: usize,
    /// Offset of the first sample in the source signal.
    pub start: usize,
    /// Samples taken from the source; the rest of the frame is zero padding.
    pub real_len: usize,
    /// Windowed samples, one vector per channel, all of the frame length.
    pub samples: Vec<Vec<f64>>,
    /// RMS weight of the unwindowed samples (max over channels).
    pub weight: f64,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Frame length, hop and frame count in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FrameLayout {
    pub frame_len: usize,
    pub hop: usize,
    pub count: usize,
}

impl FrameLayout {
    pub fn new(signal_len: usize, sample_rate: u32, frame_secs: f64, hop_secs: f64) -> Result<Self> {
        if frame_secs.is_nan() || hop_secs.is_nan() || frame_secs <= 0.0 || hop_secs <= 0.0 {
            return Err(Error::Config(format!(
                "frame length ({frame_secs} s) and hop ({hop_secs} s) must be positive"
            )));
        }
        let fs = sample_rate as f64;
        let frame_len = (frame_secs * fs).round() as usize;
        if frame_len < 2 {
            return Err(Error::Config(format!(
                "frame of {frame_secs} s is shorter than two samples at {sample_rate} Hz"
            )));
        }
        let hop = ((hop_secs * fs).round() as usize).max(1);
        let count = if signal_len <= frame_len {
            1
        } else {
            (signal_len - frame_len).div_ceil(hop) + 1
        };
        Ok(Self { frame_len, hop, count })
    }

    pub fn start(&self, index: usize) -> usize {
        index * self.hop
    }
}

/// Splits `buffer` into frames starting every `hop_secs`.
///
/// Frames run until one covers the last sample; the final frame is zero
/// padded if needed. A signal shorter than one frame yields a single
/// padded frame. With `frame_secs == hop_secs` this gives
/// `ceil(N / hop)` frames.
pub fn frame_signal(buffer: &AudioBuffer, frame_secs: f64, hop_secs: f64, window: Window) -> Result<Vec<Frame>> {
    let layout = FrameLayout::new(buffer.len(), buffer.sample_rate(), frame_secs, hop_secs)?;
    let coeffs = window.coefficients(layout.frame_len);
    let frames = (0..layout.count)
        .map(|index| {
            let start = layout.start(index);
            let end = (start + layout.frame_len).min(buffer.len());
            let raw: Vec<Vec<f64>> = buffer
                .channels()
                .iter()
                .map(|c| {
                    let mut v = c[start..end].to_vec();
                    v.resize(layout.frame_len, 0.0);
                    v
                })
                .collect();
            let weight = rms_weight(&raw);
            let samples = match &coeffs {
                None => raw,
                Some(w) => raw
                    .into_iter()
                    .map(|c| c.iter().zip(w).map(|(x, g)| x * g).collect())
                    .collect(),
            };
            Frame {
                index,
                start,
                real_len: end - start,
                samples,
                weight,
            }
        })
        .collect();
    Ok(frames)
}

/// Maximum over channels of the per-channel RMS.
///
/// Returns 0 for empty input.
pub fn rms_weight<S: AsRef<[f64]>>(channels: &[S]) -> f64 {
    channels
        .iter()
        .map(|c| {
            let c = c.as_ref();
            if c.is_empty() {
                0.0
            } else {
                (c.iter().map(|x| x * x).sum::<f64>() / c.len() as f64).sqrt()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stereo(len: usize, l: f64, r: f64) -> AudioBuffer {
        AudioBuffer::stereo(100, vec![l; len], vec![r; len]).unwrap()
    }

    #[test]
    fn frame_count_without_overlap() {
        let frames = frame_signal(&stereo(200, 0.1, 0.1), 0.5, 0.5, Window::Rectangular).unwrap();
        assert_eq!(frames.len(), 4);
        assert_eq!(frames[3].start, 150);
        // partial tail
        let frames = frame_signal(&stereo(201, 0.1, 0.1), 0.5, 0.5, Window::Rectangular).unwrap();
        assert_eq!(frames.len(), 5);
        assert_eq!(frames[4].real_len, 1);
        assert_eq!(frames[4].len(), 50);
    }

    #[test]
    fn overlapping_frames_stop_at_signal_end() {
        // 1 s frames, 0.5 s hop over 3 s -> starts at 0, 0.5, 1, 1.5, 2
        let frames = frame_signal(&stereo(300, 0.1, 0.1), 1.0, 0.5, Window::Rectangular).unwrap();
        assert_eq!(frames.len(), 5);
        assert_eq!(frames.last().unwrap().real_len, 100);
    }

    #[test]
    fn short_signal_gives_one_padded_frame() {
        let frames = frame_signal(&stereo(10, 0.5, 0.5), 0.5, 0.5, Window::Rectangular).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].real_len, 10);
        assert_eq!(frames[0].len(), 50);
    }

    #[test]
    fn weights() {
        let frames = frame_signal(&stereo(100, 0.0, 0.0), 0.5, 0.5, Window::Tukey(0.5)).unwrap();
        assert!(frames.iter().all(|f| f.weight == 0.0));
        let frames = frame_signal(&stereo(100, 0.5, 0.5), 0.5, 0.5, Window::Tukey(0.5)).unwrap();
        for f in &frames {
            assert!((f.weight - 0.5).abs() < 1e-15);
        }
        // weight ignores the window, samples do not
        assert!(frames[0].samples[0][0].abs() < 1e-15);
    }

    #[test]
    fn rms_weight_takes_loudest_channel() {
        assert_eq!(rms_weight(&[vec![0.0; 8], vec![0.0; 8]]), 0.0);
        let w = rms_weight(&[vec![0.8; 8], vec![0.2; 8]]);
        assert!((w - 0.8).abs() < 1e-15);
    }

    #[test]
    fn tukey_shape() {
        let w = tukey(11, 0.5);
        assert_eq!(w[0], 0.0);
        assert_eq!(w[10], 0.0);
        assert_eq!(w[5], 1.0);
        for i in 0..11 {
            assert!((w[i] - w[10 - i]).abs() < 1e-12);
        }
        assert_eq!(tukey(4, 0.0), vec![1.0; 4]);
        // alpha = 1 is a Hann window
        let hann = tukey(9, 1.0);
        for (i, v) in hann.iter().enumerate() {
            let want = 0.5 - 0.5 * (2.0 * PI * i as f64 / 8.0).cos();
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        let b = stereo(100, 0.1, 0.1);
        assert!(frame_signal(&b, 0.0, 0.5, Window::Rectangular).is_err());
        assert!(frame_signal(&b, 0.5, -1.0, Window::Rectangular).is_err());
        assert!(frame_signal(&b, 0.01, 0.01, Window::Rectangular).is_err());
    }
}
