//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

use binaural_mss::dsp::{write_wav, AudioBuffer, Encoding};
use binaural_mss::scene::{hrir_file_name, HrirDatabase, HrirPair, Stem, GRID_AZIMUTHS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const FS: u32 = 44100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian white noise with standard deviation `sigma`.
pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let dist = Normal::new(0.0, sigma).unwrap();
    (0..n).map(|_| dist.sample(&mut r)).collect()
}

pub fn uniform_noise(n: usize, amp: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(-amp..amp)).collect()
}

/// First-order low-pass noise (AR(1) with coefficient `rho`), unit-ish RMS.
pub fn lowpass_noise(n: usize, rho: f64, seed: u64) -> Vec<f64> {
    let w = white_noise(n, (1.0 - rho * rho).sqrt(), seed);
    let mut y = Vec::with_capacity(n);
    let mut prev = 0.0;
    for x in w {
        prev = rho * prev + x;
        y.push(prev);
    }
    y
}

/// `x` delayed by `d` samples (negative advances), zero filled, same length.
pub fn shift(x: &[f64], d: i64) -> Vec<f64> {
    (0..x.len() as i64)
        .map(|k| {
            let j = k - d;
            if j >= 0 && (j as usize) < x.len() {
                x[j as usize]
            } else {
                0.0
            }
        })
        .collect()
}

pub fn scale(x: &[f64], g: f64) -> Vec<f64> {
    x.iter().map(|v| v * g).collect()
}

pub fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Direct O(N L) linear convolution.
pub fn direct_convolve(x: &[f64], h: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len() + h.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in h.iter().enumerate() {
            y[i + j] += a * b;
        }
    }
    y
}

/// Lag maximizing the plain time-domain cross-correlation
/// `sum_k l[k] r[k + tau]` over `|tau| <= max_lag`.
pub fn brute_force_lag(l: &[f64], r: &[f64], max_lag: i64) -> i64 {
    let n = l.len() as i64;
    let mut best = (0, f64::NEG_INFINITY);
    for tau in std::iter::once(0).chain((1..=max_lag).flat_map(|m| [-m, m])) {
        let mut acc = 0.0;
        for k in 0..n {
            let j = k + tau;
            if j >= 0 && j < n {
                acc += l[k as usize] * r[j as usize];
            }
        }
        if acc > best.1 {
            best = (tau, acc);
        }
    }
    best.0
}

/// Interaural delay of a rigid sphere (Woodworth), seconds; positive when
/// the left ear leads (source on the left, positive azimuth).
pub fn woodworth_itd(azimuth_deg: i32) -> f64 {
    let radius = 0.0875;
    let speed = 343.0;
    let t = (azimuth_deg as f64).to_radians();
    radius / speed * (t + t.sin())
}

/// Windowed-sinc impulse at fractional position `at`, `len` taps.
fn fractional_impulse(at: f64, len: usize, gain: f64) -> Vec<f64> {
    let half = 16.0;
    (0..len)
        .map(|k| {
            let x = k as f64 - at;
            if x.abs() > half {
                return 0.0;
            }
            let sinc = if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
            let win = 0.5 * (1.0 + (PI * x / half).cos());
            gain * sinc * win
        })
        .collect()
}

/// Spherical-head HRIR pair: Woodworth delay split across the ears and a
/// broadband head-shadow level difference. Symmetric at 0 degrees.
pub fn spherical_hrir(azimuth: i32) -> HrirPair {
    let len = 256;
    let itd_samples = woodworth_itd(azimuth) * FS as f64;
    let base = 64.0;
    let t = (azimuth as f64).to_radians();
    let shadow_db = 6.0 * t.sin();
    let gl = 10f64.powf(shadow_db / 40.0);
    let gr = 10f64.powf(-shadow_db / 40.0);
    let left = fractional_impulse(base - itd_samples / 2.0, len, gl);
    let right = fractional_impulse(base + itd_samples / 2.0, len, gr);
    HrirPair::new(azimuth, left, right, FS).unwrap()
}

pub fn spherical_database() -> HrirDatabase {
    HrirDatabase::from_pairs("sphere", GRID_AZIMUTHS.iter().map(|&a| spherical_hrir(a)).collect()).unwrap()
}

/// Writes the spherical HRIR set in the on-disk directory layout.
pub fn write_spherical_hrirs(dir: &Path) {
    std::fs::create_dir_all(dir).unwrap();
    for az in GRID_AZIMUTHS {
        let p = spherical_hrir(az);
        let b = AudioBuffer::stereo(FS, p.left, p.right).unwrap();
        write_wav(dir.join(hrir_file_name(az)), &b, Encoding::Float32).unwrap();
    }
}

/// Stereo stem with some level and content difference between channels.
pub fn stereo_stem(len: usize, seed: u64) -> AudioBuffer {
    let l = scale(&lowpass_noise(len, 0.9, seed), 0.1);
    let r: Vec<f64> = l
        .iter()
        .zip(uniform_noise(len, 0.02, seed + 1000))
        .map(|(a, b)| 0.8 * a + b)
        .collect();
    AudioBuffer::stereo(FS, l, r).unwrap()
}

/// Writes `<root>/<split>/<song>/{vocals,bass,drums,other}.wav`.
pub fn write_stem_dataset(root: &Path, split: &str, songs: &[&str], seconds: f64) {
    let len = (seconds * FS as f64) as usize;
    for (i, song) in songs.iter().enumerate() {
        let dir = root.join(split).join(song);
        std::fs::create_dir_all(&dir).unwrap();
        for (j, stem) in Stem::ALL.iter().enumerate() {
            let b = stereo_stem(len, (i * 10 + j) as u64 + 1);
            write_wav(dir.join(stem.file_name()), &b, Encoding::Pcm16).unwrap();
        }
    }
}

/// True when `x` is an integer multiple of one sample period, in µs.
pub fn is_sample_multiple_us(x: f64, fs: u32) -> bool {
    let samples = x * fs as f64 / 1e6;
    (samples - samples.round()).abs() < 1e-9
}
