//! Per-channel gain and integer-delay projection of a reference onto an
//! estimate.
//!
//! For each channel the reference is shifted by every integer delay in
//! `-max_delay..=max_delay`, the least-squares gain is taken in closed form,
//! and the (gain, delay) pair leaving the smallest residual wins. Equal
//! residuals resolve to the smallest `|d|`, then the negative delay.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::itd::lags_by_preference;
use crate::error::{Error, Result};

/// Projection of one stereo frame.
///
/// `residual_error = estimate - projected` and
/// `spatial_error = projected - reference`, elementwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialDecomposition {
    pub projected: Vec<Vec<f64>>,
    pub spatial_error: Vec<Vec<f64>>,
    pub residual_error: Vec<Vec<f64>>,
    pub gain: Vec<f64>,
    /// Delay applied to the reference, in samples; positive delays it.
    pub delay: Vec<i64>,
    /// Set when the reference is silent in every channel.
    pub reference_silent: bool,
}

impl SpatialDecomposition {
    fn energy(x: &[Vec<f64>]) -> f64 {
        x.iter().flatten().map(|v| v * v).sum()
    }

    pub fn projected_energy(&self) -> f64 {
        Self::energy(&self.projected)
    }

    pub fn spatial_error_energy(&self) -> f64 {
        Self::energy(&self.spatial_error)
    }

    pub fn residual_energy(&self) -> f64 {
        Self::energy(&self.residual_error)
    }
}

/// Projects the reference frame onto the estimate frame, channel by
/// channel. Samples shifted in from outside the frame are zero.
pub fn project_gain_delay(
    reference: &[Vec<f64>],
    estimate: &[Vec<f64>],
    max_delay: usize,
) -> Result<SpatialDecomposition> {
    if reference.len() != estimate.len() {
        return Err(Error::ChannelCount {
            expected: reference.len(),
            actual: estimate.len(),
        });
    }
    if reference.iter().zip(estimate).any(|(r, e)| r.len() != e.len()) {
        return Err(Error::LengthMismatch(
            "reference and estimate frames differ in length".into(),
        ));
    }
    let n = reference.first().map_or(0, Vec::len);
    let mut projector = Projector::new(n, max_delay);
    let channels = reference
        .iter()
        .zip(estimate)
        .map(|(r, e)| {
            let mut context = vec![0.0; max_delay];
            context.extend_from_slice(r);
            context.resize(n + 2 * max_delay, 0.0);
            projector.project_channel(&context, n, e)
        })
        .collect();
    Ok(assemble(channels, estimate))
}

/// Result for one channel.
pub(crate) struct ChannelProjection {
    pub reference: Vec<f64>,
    pub projected: Vec<f64>,
    pub gain: f64,
    pub delay: i64,
    pub silent: bool,
}

pub(crate) fn assemble(channels: Vec<ChannelProjection>, estimate: &[Vec<f64>]) -> SpatialDecomposition {
    let reference_silent = channels.iter().all(|c| c.silent);
    let mut out = SpatialDecomposition {
        projected: Vec::with_capacity(channels.len()),
        spatial_error: Vec::with_capacity(channels.len()),
        residual_error: Vec::with_capacity(channels.len()),
        gain: Vec::with_capacity(channels.len()),
        delay: Vec::with_capacity(channels.len()),
        reference_silent,
    };
    for (c, e) in channels.into_iter().zip(estimate) {
        out.residual_error
            .push(e.iter().zip(&c.projected).map(|(e, p)| e - p).collect());
        out.spatial_error
            .push(c.projected.iter().zip(&c.reference).map(|(p, s)| p - s).collect());
        out.gain.push(c.gain);
        out.delay.push(c.delay);
        out.projected.push(c.projected);
    }
    out
}

/// Delay search engine for frames of a fixed length.
pub(crate) struct Projector {
    frame_len: usize,
    max_delay: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Projector {
    pub fn new(frame_len: usize, max_delay: usize) -> Self {
        let fft_len = (frame_len + 2 * max_delay).max(1).next_power_of_two();
        let mut planner = FftPlanner::new();
        Self {
            frame_len,
            max_delay,
            fft_len,
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

    /// Projects one channel.
    ///
    /// `context` holds the reference with `max_delay` extra samples on each
    /// side, so the delay-`d` candidate at frame position `k` is
    /// `context[max_delay + k - d]`. Candidates are zero from `real_len`
    /// on, matching a zero-padded final frame.
    pub fn project_channel(&mut self, context: &[f64], real_len: usize, estimate: &[f64]) -> ChannelProjection {
        let n = self.frame_len;
        let m = self.max_delay;
        debug_assert_eq!(context.len(), n + 2 * m);
        debug_assert_eq!(estimate.len(), n);
        let real_len = real_len.min(n);

        let candidate = |d: i64| {
            let start = (m as i64 - d) as usize;
            &context[start..start + real_len]
        };
        let reference: Vec<f64> = {
            let mut r = candidate(0).to_vec();
            r.resize(n, 0.0);
            r
        };

        // cross[j] = sum_k context[j + k] * estimate[k], needed for j in 0..=2m
        let cx = self.spectrum(context);
        let ce = self.spectrum(&estimate[..real_len]);
        let mut prod: Vec<Complex<f64>> = cx.iter().zip(&ce).map(|(a, b)| a * b.conj()).collect();
        self.inverse.process(&mut prod);
        let scale = 1.0 / self.fft_len as f64;

        let mut prefix = Vec::with_capacity(context.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in context {
            acc += v * v;
            prefix.push(acc);
        }

        let est_energy: f64 = estimate[..real_len].iter().map(|v| v * v).sum();
        let tol = 1e-12 * est_energy.max(f64::MIN_POSITIVE);
        let mut best: Option<(i64, f64)> = None;
        for d in lags_by_preference(m as i64) {
            let start = (m as i64 - d) as usize;
            let energy = prefix[start + real_len] - prefix[start];
            if energy <= 0.0 {
                continue;
            }
            let dot = prod[start].re * scale;
            // residual is est_energy - captured, so maximize the captured part
            let captured = dot * dot / energy;
            if best.is_none_or(|(_, c)| captured > c + tol) {
                best = Some((d, captured));
            }
        }

        let Some((delay, _)) = best else {
            return ChannelProjection {
                reference,
                projected: vec![0.0; n],
                gain: 0.0,
                delay: 0,
                silent: true,
            };
        };

        // exact gain for the chosen delay
        let s_d = candidate(delay);
        let energy: f64 = s_d.iter().map(|v| v * v).sum();
        if energy == 0.0 {
            return ChannelProjection {
                reference,
                projected: vec![0.0; n],
                gain: 0.0,
                delay: 0,
                silent: true,
            };
        }
        let dot: f64 = s_d.iter().zip(estimate).map(|(a, b)| a * b).sum();
        let gain = dot / energy;
        let mut projected: Vec<f64> = s_d.iter().map(|v| gain * v).collect();
        projected.resize(n, 0.0);
        ChannelProjection {
            reference,
            projected,
            gain,
            delay,
            silent: false,
        }
    }
}
