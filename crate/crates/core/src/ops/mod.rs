//! Numerical transformations on poses: normalization, augmentation, frame
//! rate resampling, noise/dropout, optical flow and Savitzky-Golay smoothing.
//!
//! All functions are pure: they take a pose by reference and return a new
//! one. Coordinates are stored as f32 but intermediate math runs in f64.

mod augment;
mod flow;
mod normalize;
mod resample;
mod smooth;

pub use augment::{affine_augment, frame_dropout, gaussian_noise, AffineParams};
pub use flow::{optical_flow, FlowSeries};
pub use normalize::{normalize_plane, normalize_shoulders};
pub use resample::interpolate_fps;
pub use smooth::savgol_smooth;

pub(crate) use augment::keep_frames;
pub(crate) use normalize::rotation_to_z;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("point {0:?} is not defined by any component")]
    MissingPoint(String),
    #[error("degenerate skeleton: mean shoulder distance below 1e-9")]
    DegenerateSkeleton,
    #[error("operation requires at least 3 coordinate axes")]
    NotThreeD,
    #[error("plane points are collinear in every frame")]
    CollinearPoints,
    #[error("fps must be positive")]
    ZeroFps,
    #[error("bad filter window: {0}")]
    BadWindow(String),
}
