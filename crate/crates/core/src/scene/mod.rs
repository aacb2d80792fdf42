//! Binaural scene synthesis: HRIR loading, random source placement and
//! rendering of stem datasets.

mod hrir;
mod layout;
mod synth;

pub use hrir::{
    hrir_file_name, is_grid_azimuth, load_hrir_database, load_hrir_database_at, HrirDatabase, HrirPair,
    DATASET_SAMPLE_RATE, GRID_AZIMUTHS,
};
pub use layout::{sample_layout, song_seed, SceneLayout, Stem};
pub use synth::{
    binauralize, downmix_mono, mix_and_normalize, song_dirs, synthesize_dataset, synthesize_track, Manifest,
    ManifestStems, Mixture, Split, StemPlacement, MANIFEST_FILE, MIXTURE_FILE, MIX_PEAK,
};
