use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use super::MetricRow;
use crate::dsp::{read_wav, AudioBuffer};
use crate::error::{Error, Result};
use crate::metrics::{delta_ild, delta_itd, ssr_srr, MetricConfig};
use crate::scene::{Manifest, Stem, MANIFEST_FILE};

fn load_stems(dir: &Path) -> Result<Vec<AudioBuffer>> {
    Stem::ALL
        .iter()
        .map(|&stem| {
            let path = dir.join(stem.file_name());
            if !path.is_file() {
                return Err(Error::MissingStem {
                    stem: stem.name().into(),
                    dir: dir.to_path_buf(),
                });
            }
            read_wav(path)
        })
        .collect()
}

/// Computes every metric for the four stems of one track.
///
/// Rows come out in vocals, bass, drums, other order; azimuths are copied
/// from `manifest` when given.
pub fn evaluate_track(
    track_id: &str,
    ref_dir: impl AsRef<Path>,
    est_dir: impl AsRef<Path>,
    manifest: Option<&Manifest>,
    cfg: &MetricConfig,
) -> Result<Vec<MetricRow>> {
    let reference = load_stems(ref_dir.as_ref())?;
    let estimate = load_stems(est_dir.as_ref())?;
    Stem::ALL
        .iter()
        .zip(reference.iter().zip(&estimate))
        .map(|(&stem, (r, e))| {
            let ratios = ssr_srr(r, e, cfg)?;
            Ok(MetricRow {
                track_id: track_id.to_string(),
                stem,
                azimuth_deg: manifest.map(|m| m.azimuth(stem)),
                ssr: ratios.ssr,
                srr: ratios.srr,
                delta_itd_us: delta_itd(r, e, cfg)?,
                delta_ild_db: delta_ild(r, e)?,
            })
        })
        .collect()
}

/// Track directories under `root`: every directory holding at least one
/// stem WAV, as (id, path) with the id being the `/`-joined relative path.
pub fn find_tracks(root: impl AsRef<Path>) -> Result<Vec<(String, PathBuf)>> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(Error::Format(format!("{} is not a directory", root.display())));
    }
    let mut tracks = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Format(e.to_string()))?;
        if !entry.file_type().is_dir() {
            continue;
        }
        let dir = entry.path();
        if Stem::ALL.iter().any(|s| dir.join(s.file_name()).is_file()) {
            let rel = dir.strip_prefix(root).unwrap_or(dir);
            let id = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            tracks.push((id, dir.to_path_buf()));
        }
    }
    Ok(tracks)
}

/// Evaluates every track found under `reference` against the mirrored path
/// under `estimates`, using `jobs` worker threads. Rows are ordered by track
/// id whatever the completion order.
pub fn evaluate_tree(
    reference: impl AsRef<Path>,
    estimates: impl AsRef<Path>,
    cfg: &MetricConfig,
    jobs: usize,
) -> Result<Vec<MetricRow>> {
    let tracks = find_tracks(reference.as_ref())?;
    if tracks.is_empty() {
        return Err(Error::Format(format!(
            "no tracks with stem WAVs under {}",
            reference.as_ref().display()
        )));
    }
    let estimates = estimates.as_ref();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let per_track: Vec<Vec<MetricRow>> = pool.install(|| {
        tracks
            .par_iter()
            .map(|(id, ref_dir)| {
                let manifest_path = ref_dir.join(MANIFEST_FILE);
                let manifest = if manifest_path.is_file() {
                    Some(Manifest::read(&manifest_path)?)
                } else {
                    None
                };
                log::info!("evaluating {id}");
                let est_dir = if id.is_empty() {
                    estimates.to_path_buf()
                } else {
                    estimates.join(id)
                };
                evaluate_track(id, ref_dir, &est_dir, manifest.as_ref(), cfg)
            })
            .collect::<Result<_>>()
    })?;
    Ok(per_track.into_iter().flatten().collect())
}
