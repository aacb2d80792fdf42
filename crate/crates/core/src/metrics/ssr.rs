//! Frame-wise signal-to-spatial (SSR) and signal-to-residual (SRR)
//! distortion ratios.

use super::itd::check_pair;
use super::projection::{assemble, Projector, SpatialDecomposition};
use super::{median, MetricConfig, MetricValue};
use crate::dsp::{rms_weight, AudioBuffer, FrameLayout};
use crate::error::{Error, Result};

/// Ratios for one retained frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRatios {
    pub frame_index: usize,
    pub ssr: MetricValue,
    pub srr: MetricValue,
}

/// Median SSR and SRR over non-silent frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsrSrr {
    pub ssr: MetricValue,
    pub srr: MetricValue,
    pub frames_used: usize,
    pub frames_total: usize,
}

/// Brings both signals to a common length.
///
/// A difference of at most one window is trimmed away with a warning;
/// anything larger is refused.
pub(crate) fn align_lengths(
    reference: &AudioBuffer,
    estimate: &AudioBuffer,
    cfg: &MetricConfig,
) -> Result<(AudioBuffer, AudioBuffer)> {
    let (nr, ne) = (reference.len(), estimate.len());
    if nr == ne {
        return Ok((reference.clone(), estimate.clone()));
    }
    let window = (cfg.ssr_window * reference.sample_rate() as f64).round() as usize;
    let diff = nr.abs_diff(ne);
    if diff > window {
        return Err(Error::LengthMismatch(format!(
            "reference has {nr} samples, estimate {ne}; differ by more than one {} s frame",
            cfg.ssr_window
        )));
    }
    log::warn!(
        "trimming reference ({nr}) and estimate ({ne}) to {} samples",
        nr.min(ne)
    );
    let n = nr.min(ne);
    Ok((reference.truncated(n), estimate.truncated(n)))
}

/// Decomposes every frame and returns per-frame ratios for frames whose
/// reference RMS weight reaches the silence threshold.
pub fn frame_ratios(
    reference: &AudioBuffer,
    estimate: &AudioBuffer,
    cfg: &MetricConfig,
) -> Result<(Vec<FrameRatios>, usize)> {
    check_pair(reference, estimate)?;
    cfg.validate(reference.sample_rate())?;
    let (reference, estimate) = align_lengths(reference, estimate, cfg)?;
    let fs = reference.sample_rate();
    let layout = FrameLayout::new(reference.len(), fs, cfg.ssr_window, cfg.ssr_hop)?;
    let n = layout.frame_len;
    let m = cfg.proj_max_delay_samples(fs);
    let len = reference.len();
    let mut projector = Projector::new(n, m);

    let mut out = Vec::new();
    for index in 0..layout.count {
        let start = layout.start(index);
        let real_len = (len - start).min(n);
        let est_frame: Vec<Vec<f64>> = estimate
            .channels()
            .iter()
            .map(|c| {
                let mut v = c[start..start + real_len].to_vec();
                v.resize(n, 0.0);
                v
            })
            .collect();
        let ref_frame: Vec<&[f64]> = reference
            .channels()
            .iter()
            .map(|c| &c[start..start + real_len])
            .collect();
        // same divisor as the ITD frames: the full frame length
        let weight = rms_weight(&ref_frame) * (real_len as f64 / n as f64).sqrt();
        if weight < cfg.silence_threshold {
            continue;
        }
        let channels = reference
            .channels()
            .iter()
            .zip(&est_frame)
            .map(|(c, e)| {
                let context = context_window(c, start as i64 - m as i64, n + 2 * m);
                projector.project_channel(&context, real_len, e)
            })
            .collect();
        let decomposition = assemble(channels, &est_frame);
        let reference_energy: f64 = ref_frame.iter().flat_map(|c| c.iter()).map(|v| v * v).sum();
        out.push(ratios(index, &decomposition, reference_energy, cfg));
    }
    Ok((out, layout.count))
}

/// `len` samples of `x` starting at `from`, zero outside the signal.
fn context_window(x: &[f64], from: i64, len: usize) -> Vec<f64> {
    (0..len as i64)
        .map(|k| {
            let j = from + k;
            if j >= 0 && (j as usize) < x.len() {
                x[j as usize]
            } else {
                0.0
            }
        })
        .collect()
}

fn ratios(frame_index: usize, d: &SpatialDecomposition, reference_energy: f64, cfg: &MetricConfig) -> FrameRatios {
    FrameRatios {
        frame_index,
        ssr: MetricValue::energy_ratio_db(reference_energy, d.spatial_error_energy(), cfg.null_energy_ratio),
        srr: MetricValue::energy_ratio_db(d.projected_energy(), d.residual_energy(), cfg.null_energy_ratio),
    }
}

/// Median frame SSR and SRR (1 s rectangular frames, 0.5 s hop by default).
pub fn ssr_srr(reference: &AudioBuffer, estimate: &AudioBuffer, cfg: &MetricConfig) -> Result<SsrSrr> {
    let (frames, total) = frame_ratios(reference, estimate, cfg)?;
    let ssr: Vec<MetricValue> = frames.iter().map(|f| f.ssr).collect();
    let srr: Vec<MetricValue> = frames.iter().map(|f| f.srr).collect();
    Ok(SsrSrr {
        ssr: median(&ssr),
        srr: median(&srr),
        frames_used: frames.len(),
        frames_total: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const FS: u32 = 8000;

    fn noise(n: usize, seed: u64, amp: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-amp..amp)).collect()
    }

    fn shift(x: &[f64], d: i64) -> Vec<f64> {
        context_window(x, -d, x.len())
    }

    #[test]
    fn identical_is_infinite() {
        let r = AudioBuffer::stereo(FS, noise(20000, 1, 0.5), noise(20000, 2, 0.5)).unwrap();
        let out = ssr_srr(&r, &r, &MetricConfig::default()).unwrap();
        assert_eq!(out.ssr, MetricValue::Infinite);
        assert_eq!(out.srr, MetricValue::Infinite);
        assert_eq!(out.frames_used, out.frames_total);
    }

    #[test]
    fn whole_signal_delay_is_captured_across_frame_edges() {
        let l = noise(20000, 3, 0.5);
        let r = noise(20000, 4, 0.5);
        let reference = AudioBuffer::stereo(FS, l.clone(), r.clone()).unwrap();
        let est_r: Vec<f64> = shift(&r, 5).iter().map(|v| v * 0.8).collect();
        let estimate = AudioBuffer::stereo(FS, l, est_r).unwrap();
        let out = ssr_srr(&reference, &estimate, &MetricConfig::default()).unwrap();
        assert_eq!(out.srr, MetricValue::Infinite);
        assert!(out.ssr.finite().is_some());
    }

    #[test]
    fn silent_reference_is_undefined() {
        let z = AudioBuffer::stereo(FS, vec![0.0; 20000], vec![0.0; 20000]).unwrap();
        let e = AudioBuffer::stereo(FS, noise(20000, 5, 0.5), noise(20000, 6, 0.5)).unwrap();
        let out = ssr_srr(&z, &e, &MetricConfig::default()).unwrap();
        assert_eq!(out.ssr, MetricValue::Undefined);
        assert_eq!(out.srr, MetricValue::Undefined);
        assert_eq!(out.frames_used, 0);
    }

    #[test]
    fn length_rules() {
        let a = AudioBuffer::stereo(FS, noise(20000, 7, 0.5), noise(20000, 8, 0.5)).unwrap();
        let b = a.truncated(20000 - 100);
        let out = ssr_srr(&a, &b, &MetricConfig::default()).unwrap();
        assert_eq!(out.srr, MetricValue::Infinite);
        let c = a.truncated(20000 - FS as usize - 1);
        assert!(matches!(
            ssr_srr(&a, &c, &MetricConfig::default()),
            Err(Error::LengthMismatch(_))
        ));
    }
}
