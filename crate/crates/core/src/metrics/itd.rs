//! Interaural time difference from frame-wise GCC-PHAT.

use std::collections::BTreeMap;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{MetricConfig, MetricValue};
use crate::dsp::{frame_signal, AudioBuffer, Frame, Window};
use crate::error::{Error, Result};

/// Time difference of arrival for one frame.
///
/// Positive lags mean the left channel leads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdoaEstimate {
    pub lag_samples: i64,
    pub lag_seconds: f64,
    pub frame_index: usize,
    pub weight: f64,
}

/// Yields lags in the order 0, -1, 1, -2, 2, ... up to `max`, so that a
/// strict `>` scan resolves ties toward small magnitude, then negative.
pub(crate) fn lags_by_preference(max: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=max).flat_map(|m| [-m, m]))
}

/// GCC-PHAT correlator for a fixed frame length.
pub struct GccPhat {
    fft_len: usize,
    max_lag: usize,
    phat_floor: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl GccPhat {
    pub fn new(frame_len: usize, max_lag: usize, phat_floor: f64) -> Self {
        // long enough that lags within +-max_lag never wrap
        let fft_len = (frame_len + max_lag + 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        Self {
            fft_len,
            max_lag,
            phat_floor,
            forward: planner.plan_fft_forward(fft_len),
            inverse: planner.plan_fft_inverse(fft_len),
        }
    }

    fn spectrum(&self, x: &[f64]) -> Vec<Complex<f64>> {
        let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        buf.resize(self.fft_len, Complex::new(0.0, 0.0));
        self.forward.process(&mut buf);
        buf
    }

    /// PHAT-weighted correlation `C(tau)` for `tau` in `-max_lag..=max_lag`,
    /// indexed by `tau + max_lag`. `C(tau)` peaks at `tau = D` when the
    /// right channel is the left one delayed by `D` samples.
    pub fn correlation(&self, left: &[f64], right: &[f64]) -> Vec<f64> {
        let xl = self.spectrum(left);
        let xr = self.spectrum(right);
        let mut g: Vec<Complex<f64>> = xl
            .iter()
            .zip(&xr)
            .map(|(l, r)| {
                let c = l * r.conj();
                c / c.norm().max(self.phat_floor)
            })
            .collect();
        self.inverse.process(&mut g);
        // ifft(X_L conj X_R)[m] = sum_k l[k + m] r[k], so C(tau) sits at m = -tau
        let n = self.fft_len as i64;
        let max = self.max_lag as i64;
        (-max..=max)
            .map(|tau| g[(-tau).rem_euclid(n) as usize].re / n as f64)
            .collect()
    }

    /// Lag maximizing the correlation.
    pub fn lag(&self, left: &[f64], right: &[f64]) -> i64 {
        let c = self.correlation(left, right);
        let max = self.max_lag as i64;
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for tau in lags_by_preference(max) {
            let v = c[(tau + max) as usize];
            if v > best_val {
                best_val = v;
                best = tau;
            }
        }
        best
    }
}

/// GCC-PHAT time difference of arrival for one stereo frame.
pub fn gcc_phat_tdoa(frame: &Frame, sample_rate: u32, cfg: &MetricConfig) -> Result<TdoaEstimate> {
    if frame.samples.len() != 2 {
        return Err(Error::ChannelCount {
            expected: 2,
            actual: frame.samples.len(),
        });
    }
    let gcc = GccPhat::new(frame.len(), cfg.max_lag_samples(sample_rate), cfg.phat_floor);
    let lag = gcc.lag(&frame.samples[0], &frame.samples[1]);
    Ok(tdoa(lag, frame, sample_rate))
}

fn tdoa(lag: i64, frame: &Frame, sample_rate: u32) -> TdoaEstimate {
    TdoaEstimate {
        lag_samples: lag,
        lag_seconds: lag as f64 / sample_rate as f64,
        frame_index: frame.index,
        weight: frame.weight,
    }
}

/// Per-frame TDOA estimates over the whole signal, silent frames included.
pub fn frame_tdoas(buffer: &AudioBuffer, cfg: &MetricConfig) -> Result<Vec<TdoaEstimate>> {
    buffer.require_channels(2)?;
    cfg.validate(buffer.sample_rate())?;
    let frames = frame_signal(buffer, cfg.itd_frame_len, cfg.itd_hop, Window::Tukey(cfg.tukey_alpha))?;
    let gcc = GccPhat::new(
        frames[0].len(),
        cfg.max_lag_samples(buffer.sample_rate()),
        cfg.phat_floor,
    );
    Ok(frames
        .iter()
        .map(|f| tdoa(gcc.lag(&f.samples[0], &f.samples[1]), f, buffer.sample_rate()))
        .collect())
}

/// ITD in samples: the RMS-weighted mode of the frame lags over non-silent
/// frames, or `None` when every frame is silent.
pub fn itd_lag(buffer: &AudioBuffer, cfg: &MetricConfig) -> Result<Option<i64>> {
    let mut votes: BTreeMap<i64, f64> = BTreeMap::new();
    for est in frame_tdoas(buffer, cfg)? {
        if est.weight >= cfg.silence_threshold {
            *votes.entry(est.lag_samples).or_default() += est.weight;
        }
    }
    let mut best: Option<(i64, f64)> = None;
    for (&lag, &w) in &votes {
        let better = match best {
            None => true,
            Some((b, bw)) => w > bw || (w == bw && (lag.abs(), lag) < (b.abs(), b)),
        };
        if better {
            best = Some((lag, w));
        }
    }
    Ok(best.map(|(lag, _)| lag))
}

/// ITD in seconds.
pub fn signal_itd(buffer: &AudioBuffer, cfg: &MetricConfig) -> Result<MetricValue> {
    Ok(match itd_lag(buffer, cfg)? {
        Some(lag) => MetricValue::Finite(lag as f64 / buffer.sample_rate() as f64),
        None => MetricValue::Undefined,
    })
}

pub(crate) fn check_pair(reference: &AudioBuffer, estimate: &AudioBuffer) -> Result<()> {
    if reference.sample_rate() != estimate.sample_rate() {
        return Err(Error::SampleRateMismatch {
            expected: reference.sample_rate(),
            actual: estimate.sample_rate(),
        });
    }
    reference.require_channels(2)?;
    estimate.require_channels(2)
}

/// `|ITD(reference) - ITD(estimate)|` in microseconds.
///
/// Computed from whole-sample lags, so the result is always a multiple of
/// one sample period.
pub fn delta_itd(reference: &AudioBuffer, estimate: &AudioBuffer, cfg: &MetricConfig) -> Result<MetricValue> {
    check_pair(reference, estimate)?;
    let (Some(a), Some(b)) = (itd_lag(reference, cfg)?, itd_lag(estimate, cfg)?) else {
        return Ok(MetricValue::Undefined);
    };
    Ok(MetricValue::Finite(
        (a - b).unsigned_abs() as f64 * 1e6 / reference.sample_rate() as f64,
    ))
}
