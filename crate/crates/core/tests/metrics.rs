mod common;

use binaural_mss::dsp::{AudioBuffer, Frame};
use binaural_mss::metrics::*;
use common::*;
use proptest::prelude::*;

fn frame(l: Vec<f64>, r: Vec<f64>) -> Frame {
    Frame {
        index: 0,
        start: 0,
        real_len: l.len(),
        samples: vec![l, r],
        weight: 1.0,
    }
}

fn stereo(l: Vec<f64>, r: Vec<f64>) -> AudioBuffer {
    AudioBuffer::stereo(FS, l, r).unwrap()
}

#[test]
fn gcc_phat_agrees_with_brute_force_correlation() {
    let cfg = MetricConfig::default();
    let x = white_noise(22050, 0.3, 21);
    let y = shift(&x, 10);
    let oracle = brute_force_lag(&x, &y, 44);
    assert_eq!(oracle, 10);
    let est = gcc_phat_tdoa(&frame(x, y), FS, &cfg).unwrap();
    assert_eq!(est.lag_samples, oracle);
    // 10 / 44100 s
    assert!((est.lag_seconds * 1e6 - 226.757).abs() < 5e-4);
}

#[test]
fn itd_of_21_sample_delay() {
    let x = white_noise(3 * FS as usize, 0.2, 22);
    let b = stereo(x.clone(), shift(&x, 21));
    let itd = signal_itd(&b, &MetricConfig::default()).unwrap().finite().unwrap();
    assert!((itd * 1e6 - 476.19).abs() < 5e-3);
}

#[test]
fn delta_itd_examples() {
    let cfg = MetricConfig::default();
    let l = white_noise(2 * FS as usize, 0.2, 23);
    let r = shift(&l, 3);
    let reference = stereo(l.clone(), r.clone());
    assert_eq!(
        delta_itd(&reference, &reference, &cfg).unwrap(),
        MetricValue::Finite(0.0)
    );
    let common_delay = stereo(shift(&l, 5), shift(&r, 5));
    assert_eq!(
        delta_itd(&reference, &common_delay, &cfg).unwrap(),
        MetricValue::Finite(0.0)
    );
    let advanced = stereo(l, shift(&r, -1));
    let d = delta_itd(&reference, &advanced, &cfg).unwrap().finite().unwrap();
    assert!((d - 22.676).abs() < 1e-3);
    assert!(is_sample_multiple_us(d, FS));
}

#[test]
fn delta_itd_undefined_when_silent() {
    let cfg = MetricConfig::default();
    let reference = stereo(white_noise(FS as usize, 0.2, 24), white_noise(FS as usize, 0.2, 25));
    let silent = stereo(vec![0.0; FS as usize], vec![0.0; FS as usize]);
    assert_eq!(delta_itd(&reference, &silent, &cfg).unwrap(), MetricValue::Undefined);
}

#[test]
fn projection_recovers_gain_and_delay() {
    let s = vec![white_noise(44100, 0.3, 26), white_noise(44100, 0.3, 27)];
    let est = vec![s[0].clone(), scale(&shift(&s[1], 5), 0.8)];
    let d = project_gain_delay(&s, &est, 44).unwrap();
    assert_eq!(d.delay[1], 5);
    assert!((d.gain[1] - 0.8).abs() < 1e-12);
    assert!(d.residual_energy() <= 1e-10);
    assert!(d.spatial_error_energy() > 0.0);
}

#[test]
fn projection_with_noise_keeps_zero_delay() {
    let s = vec![white_noise(44100, 0.3, 28), white_noise(44100, 0.3, 29)];
    let est: Vec<Vec<f64>> = s
        .iter()
        .enumerate()
        .map(|(c, x)| {
            // 20 dB SNR
            let n = white_noise(x.len(), 0.03, 30 + c as u64);
            x.iter().zip(n).map(|(a, b)| a + b).collect()
        })
        .collect();
    let d = project_gain_delay(&s, &est, 44).unwrap();
    assert_eq!(d.delay, vec![0, 0]);
    for g in d.gain {
        assert!((g - 1.0).abs() <= 0.01);
    }
}

#[test]
fn ssr_srr_examples() {
    let cfg = MetricConfig::default();
    let n = 4 * FS as usize;
    let l = white_noise(n, 0.2, 31);
    let r = white_noise(n, 0.2, 32);
    let reference = stereo(l.clone(), r.clone());
    let out = ssr_srr(&reference, &reference, &cfg).unwrap();
    assert_eq!((out.ssr, out.srr), (MetricValue::Infinite, MetricValue::Infinite));

    let perturbed = stereo(l.clone(), scale(&shift(&r, 5), 0.8));
    let out = ssr_srr(&reference, &perturbed, &cfg).unwrap();
    assert_eq!(out.srr, MetricValue::Infinite);
    assert!(out.ssr.finite().is_some());

    let noisy = stereo(
        l.iter().zip(white_noise(n, 0.02, 33)).map(|(a, b)| a + b).collect(),
        r.iter().zip(white_noise(n, 0.02, 34)).map(|(a, b)| a + b).collect(),
    );
    let out = ssr_srr(&reference, &noisy, &cfg).unwrap();
    let srr = out.srr.finite().unwrap();
    assert!((srr - 20.0).abs() <= 1.0, "srr {srr}");
    assert!(out.ssr.finite().unwrap() >= 40.0);
}

#[test]
fn itd_of_every_finite_result_is_sample_quantized() {
    let cfg = MetricConfig::default();
    for seed in 0..6 {
        let x = white_noise(FS as usize, 0.2, 100 + seed);
        let d = (seed as i64 * 7) % 44 - 20;
        let b = stereo(x.clone(), shift(&x, d));
        let itd = signal_itd(&b, &cfg).unwrap().finite().unwrap();
        let samples = itd * FS as f64;
        assert!((samples - (d as f64)).abs() < 1e-9, "{samples} vs {d}");
    }
}

#[test]
fn srr_falls_with_snr_and_ssr_falls_with_delay_error() {
    let cfg = MetricConfig::default();
    let n = 3 * FS as usize;
    let trials = 100u64;
    let mut srr_by_snr = [Vec::new(), Vec::new(), Vec::new()];
    let mut ssr_by_delay = [Vec::new(), Vec::new(), Vec::new()];
    for t in 0..trials {
        let l = lowpass_noise(n, 0.95, 1000 + t);
        let r = lowpass_noise(n, 0.95, 2000 + t);
        let reference = stereo(l.clone(), r.clone());
        for (i, snr) in [30.0, 20.0, 10.0].into_iter().enumerate() {
            let sigma = 10f64.powf(-snr / 20.0);
            let est = stereo(
                l.iter()
                    .zip(white_noise(n, sigma, 3000 + t))
                    .map(|(a, b)| a + b)
                    .collect(),
                r.iter()
                    .zip(white_noise(n, sigma, 4000 + t))
                    .map(|(a, b)| a + b)
                    .collect(),
            );
            let (frames, _) = frame_ratios(&reference, &est, &cfg).unwrap();
            let v: Vec<MetricValue> = frames.iter().map(|f| f.srr).collect();
            srr_by_snr[i].push(median(&v));
        }
        for (i, d) in [0, 5, 20].into_iter().enumerate() {
            let noise_l = white_noise(n, 0.03, 5000 + t);
            let noise_r = white_noise(n, 0.03, 6000 + t);
            let est = stereo(
                l.iter().zip(&noise_l).map(|(a, b)| a + b).collect(),
                shift(&r, d).iter().zip(&noise_r).map(|(a, b)| a + b).collect(),
            );
            ssr_by_delay[i].push(ssr_srr(&reference, &est, &cfg).unwrap().ssr);
        }
    }
    let med = |v: &[MetricValue]| median(v).finite().unwrap();
    let srr: Vec<f64> = srr_by_snr.iter().map(|v| med(v)).collect();
    assert!(srr[0] > srr[1] && srr[1] > srr[2], "{srr:?}");
    let ssr: Vec<f64> = ssr_by_delay.iter().map(|v| med(v)).collect();
    assert!(ssr[0] > ssr[1] && ssr[1] > ssr[2], "{ssr:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tdoa_antisymmetric_and_gain_invariant(d in -40i64..=40, g in 0.01..10.0f64, seed in any::<u64>()) {
        let cfg = MetricConfig::default();
        let x = white_noise(22050, 0.2, seed);
        let y = shift(&x, d);
        let a = gcc_phat_tdoa(&frame(x.clone(), y.clone()), FS, &cfg).unwrap().lag_samples;
        let b = gcc_phat_tdoa(&frame(y.clone(), x.clone()), FS, &cfg).unwrap().lag_samples;
        let c = gcc_phat_tdoa(&frame(scale(&x, g), scale(&y, g)), FS, &cfg).unwrap().lag_samples;
        prop_assert_eq!(a, d);
        prop_assert_eq!(b, -a);
        prop_assert_eq!(c, a);
    }

    #[test]
    fn ild_gain_invariant_and_swap_antisymmetric(g in 0.001..100.0f64, seed in any::<u64>()) {
        let l = white_noise(2000, 0.3, seed);
        let r = white_noise(2000, 0.1, seed ^ 1);
        let base = signal_ild(&stereo(l.clone(), r.clone())).unwrap().finite().unwrap();
        let scaled = signal_ild(&stereo(scale(&l, g), scale(&r, g))).unwrap().finite().unwrap();
        let swapped = signal_ild(&stereo(r, l)).unwrap().finite().unwrap();
        prop_assert!((base - scaled).abs() < 1e-9);
        prop_assert!((base + swapped).abs() < 1e-12);
    }

    #[test]
    fn deltas_are_symmetric(d in -10i64..=10, g in 0.2..2.0f64, seed in any::<u64>()) {
        let cfg = MetricConfig::default();
        let l = white_noise(FS as usize, 0.2, seed);
        let r = white_noise(FS as usize, 0.2, seed ^ 7);
        let a = stereo(l.clone(), r.clone());
        let b = stereo(l, scale(&shift(&r, d), g));
        prop_assert_eq!(delta_itd(&a, &b, &cfg).unwrap(), delta_itd(&b, &a, &cfg).unwrap());
        let x = delta_ild(&a, &b).unwrap().finite().unwrap();
        let y = delta_ild(&b, &a).unwrap().finite().unwrap();
        prop_assert!((x - y).abs() < 1e-12);
        prop_assert_eq!(delta_ild(&a, &a).unwrap(), MetricValue::Finite(0.0));
    }

    #[test]
    fn projection_exact_for_gain_delay_model(
        a0 in 0.5..1.5f64, a1 in 0.5..1.5f64, d0 in -44i64..=44, d1 in -44i64..=44, seed in any::<u64>()
    ) {
        let s = vec![white_noise(8000, 0.3, seed), white_noise(8000, 0.3, seed ^ 3)];
        let est = vec![scale(&shift(&s[0], d0), a0), scale(&shift(&s[1], d1), a1)];
        let dec = project_gain_delay(&s, &est, 44).unwrap();
        prop_assert_eq!(dec.delay.clone(), vec![d0, d1]);
        let est_energy: f64 = est.iter().map(|c| energy(c)).sum();
        prop_assert!(dec.residual_energy() <= 1e-10 * est_energy);
        for c in 0..2 {
            for k in 0..8000 {
                prop_assert_eq!(dec.spatial_error[c][k], dec.projected[c][k] - s[c][k]);
                let sum = dec.projected[c][k] + dec.residual_error[c][k];
                prop_assert!((sum - est[c][k]).abs() <= 4.0 * f64::EPSILON);
            }
        }
    }
}
