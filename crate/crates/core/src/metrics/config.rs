use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Framing, gating and search constants for every metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// ITD frame length in seconds.
    pub itd_frame_len: f64,
    /// ITD hop in seconds.
    pub itd_hop: f64,
    pub tukey_alpha: f64,
    /// Frames whose RMS weight is below this amplitude are treated as silent.
    pub silence_threshold: f64,
    /// GCC-PHAT lag search half-range in seconds.
    pub max_lag: f64,
    pub ssr_window: f64,
    pub ssr_hop: f64,
    /// Gain-delay projection delay search half-range in seconds.
    pub proj_max_delay: f64,
    pub phat_floor: f64,
    /// Error energy at or below this fraction of the signal energy counts
    /// as zero, making the ratio infinite.
    pub null_energy_ratio: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            itd_frame_len: 0.5,
            itd_hop: 0.5,
            tukey_alpha: 0.5,
            silence_threshold: 5e-4,
            max_lag: 1e-3,
            ssr_window: 1.0,
            ssr_hop: 0.5,
            proj_max_delay: 1e-3,
            phat_floor: 1e-15,
            null_energy_ratio: 1e-10,
        }
    }
}

fn samples(secs: f64, sample_rate: u32) -> usize {
    // tolerate representation error such as 0.001 * 44100 = 44.1000000001
    (secs * sample_rate as f64 + 1e-9).floor() as usize
}

impl MetricConfig {
    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        let fields = [
            ("itd_frame_len", self.itd_frame_len),
            ("itd_hop", self.itd_hop),
            ("silence_threshold", self.silence_threshold),
            ("max_lag", self.max_lag),
            ("ssr_window", self.ssr_window),
            ("ssr_hop", self.ssr_hop),
            ("proj_max_delay", self.proj_max_delay),
            ("phat_floor", self.phat_floor),
            ("null_energy_ratio", self.null_energy_ratio),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.tukey_alpha) {
            return Err(Error::Config(format!(
                "tukey_alpha must lie in [0, 1], got {}",
                self.tukey_alpha
            )));
        }
        if self.max_lag_samples(sample_rate) < 1 {
            return Err(Error::Config(format!(
                "max_lag of {} s is under one sample at {sample_rate} Hz",
                self.max_lag
            )));
        }
        Ok(())
    }

    pub fn max_lag_samples(&self, sample_rate: u32) -> usize {
        samples(self.max_lag, sample_rate)
    }

    pub fn proj_max_delay_samples(&self, sample_rate: u32) -> usize {
        samples(self.proj_max_delay, sample_rate)
    }
}
