//! Interaural level difference over the whole signal.

use super::{MetricValue, NEG_INFINITE_DB};
use crate::dsp::AudioBuffer;
use crate::error::Result;

/// `10 log10(sum L^2 / sum R^2)` in dB.
///
/// A silent right channel gives `Infinite`; a silent left channel gives
/// [`NEG_INFINITE_DB`]; two silent channels give `Undefined`.
pub fn signal_ild(buffer: &AudioBuffer) -> Result<MetricValue> {
    buffer.require_channels(2)?;
    let energy = |c: &[f64]| c.iter().map(|x| x * x).sum::<f64>();
    let left = energy(buffer.channel(0));
    let right = energy(buffer.channel(1));
    Ok(match (left > 0.0, right > 0.0) {
        (false, false) => MetricValue::Undefined,
        (true, false) => MetricValue::Infinite,
        (false, true) => MetricValue::Finite(NEG_INFINITE_DB),
        (true, true) => MetricValue::Finite((10.0 * (left / right).log10()).max(NEG_INFINITE_DB)),
    })
}

/// `|ILD(reference) - ILD(estimate)|` in dB.
pub fn delta_ild(reference: &AudioBuffer, estimate: &AudioBuffer) -> Result<MetricValue> {
    super::itd::check_pair(reference, estimate)?;
    Ok(ild_difference(signal_ild(reference)?, signal_ild(estimate)?))
}

fn ild_difference(a: MetricValue, b: MetricValue) -> MetricValue {
    use MetricValue::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Infinite, Infinite) => Finite(0.0),
        (Infinite, _) | (_, Infinite) => Infinite,
        (Finite(x), Finite(y)) => Finite((x - y).abs()),
    }
}
