//! Binaural rendering of stem-based music datasets and spatial-fidelity
//! metrics (interaural time/level difference, spatial and residual
//! distortion ratios) for evaluating source-separation output.

pub mod dsp;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod scene;

pub use error::{Error, Result};
