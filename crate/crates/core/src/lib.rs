//! Pose data engineering toolkit.
//!
//! The center of the crate is the [`container`] module with the `.pose` binary
//! container (a header describing named keypoint components plus a dense
//! `frames x people x points x axes` tensor with per-point confidences).
//! Around it sit numeric transforms ([`ops`]), 3-D hand analysis ([`hand`]),
//! frame tagging and segment decoding ([`segmentation`]), gloss clip stitching
//! ([`stitch`]), Formal SignWriting tokenization ([`fsw`]), an OpenPose JSON
//! adapter ([`openpose`]), a read-speed/size benchmark ([`bench`]), and a
//! frame rasterizer ([`render`]).
//!
//! All values are immutable after construction; every operation returns a new
//! value, so everything here is safe to share across threads.

pub mod bench;
pub mod container;
pub mod fsw;
pub mod hand;
pub mod openpose;
pub mod ops;
pub mod render;
pub mod segmentation;
pub mod stitch;

pub use container::{ComponentSpec, Pose, PoseBody, PoseHeader};
