//! Spatial-fidelity metrics: ITD, ILD, their differences, and the
//! projection-based SSR / SRR ratios.

mod config;
mod ild;
mod itd;
mod projection;
mod ssr;
mod value;

pub use config::MetricConfig;
pub use ild::{delta_ild, signal_ild};
pub use itd::{delta_itd, frame_tdoas, gcc_phat_tdoa, itd_lag, signal_itd, GccPhat, TdoaEstimate};
pub use projection::{project_gain_delay, SpatialDecomposition};
pub use ssr::{frame_ratios, ssr_srr, FrameRatios, SsrSrr};
pub use value::{compare, median, quantile_sorted, sorted_defined, MetricValue, NEG_INFINITE_DB};
