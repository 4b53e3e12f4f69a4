//! Gloss clip assembly: trim static lead-in/out, find minimal-distance cut
//! points, concatenate with padding, interpolate the gaps, fill missing
//! keypoints and smooth the result.

use thiserror::Error;

use crate::container::Pose;
use crate::ops::{keep_frames, optical_flow, savgol_smooth, OpsError};

#[derive(Debug, Error)]
pub enum StitchError {
    #[error("no clips given")]
    EmptyInput,
    #[error("clip schemas differ: {0}")]
    SchemaMismatch(String),
    #[error("no point is present in both frames of any candidate pair")]
    NoSharedPoints,
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("component {component:?} has no point {point:?}")]
    UnknownPoint { component: String, point: String },
    #[error(transparent)]
    Ops(#[from] OpsError),
}

/// Stitching parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchConfig {
    /// Silence inserted between consecutive clips, in seconds.
    pub padding_seconds: f64,
    /// Cut-point search window in frames; `None` means a quarter of the clip
    /// length, with a minimum of 2.
    pub search_window: Option<usize>,
    /// Leading/trailing frames whose total flow is below this fraction of
    /// the clip's peak flow are trimmed.
    pub trim_flow_fraction: f64,
    pub savgol_window: usize,
    pub savgol_polyorder: usize,
    /// Components excluded from the cut-point distance (face detail does not
    /// matter for finding a good cut).
    pub exclude_from_distance: Vec<String>,
}

impl Default for StitchConfig {
    fn default() -> Self {
        Self {
            padding_seconds: 0.2,
            search_window: None,
            trim_flow_fraction: 0.2,
            savgol_window: 7,
            savgol_polyorder: 2,
            exclude_from_distance: vec!["FACE".into(), "face_keypoints_2d".into()],
        }
    }
}

impl StitchConfig {
    fn window(&self, clip_len: usize) -> usize {
        self.search_window.unwrap_or((clip_len / 4).max(2)).min(clip_len).max(1)
    }

    fn gap_frames(&self, fps: u16) -> usize {
        (self.padding_seconds * fps as f64).round() as usize
    }
}

/// Removes leading and trailing frames whose total flow (summed over all
/// people and points) falls strictly below `trim_flow_fraction` times the
/// clip's peak frame flow. The first frame has no incoming displacement, so
/// it borrows the second frame's flow for the leading scan. At least one
/// frame is always kept.
pub fn trim_pose(pose: &Pose, config: &StitchConfig) -> Pose {
    let frames = pose.frames();
    if frames == 0 {
        return pose.clone();
    }
    let flow = optical_flow(pose);
    let totals: Vec<f64> = (0..frames).map(|f| flow.frame_total(f)).collect();
    let effective = |f: usize| {
        if f == 0 && frames > 1 {
            totals[1]
        } else {
            totals[f]
        }
    };
    let peak = totals.iter().copied().fold(0.0f64, f64::max);
    let threshold = config.trim_flow_fraction * peak;

    let mut lo = 0;
    while lo + 1 < frames && effective(lo) < threshold {
        lo += 1;
    }
    let mut hi = frames - 1;
    while hi > lo && totals[hi] < threshold {
        hi -= 1;
    }
    if lo == 0 && hi == frames - 1 {
        return pose.clone();
    }
    keep_frames(pose, &(lo..=hi).collect::<Vec<_>>())
}

fn check_schema(a: &Pose, b: &Pose) -> Result<(), StitchError> {
    if a.header.components != b.header.components {
        return Err(StitchError::SchemaMismatch("component lists differ".into()));
    }
    if a.body.people() != b.body.people() {
        return Err(StitchError::SchemaMismatch(format!(
            "people counts differ: {} vs {}",
            a.body.people(),
            b.body.people()
        )));
    }
    if a.body.fps != b.body.fps {
        return Err(StitchError::SchemaMismatch(format!(
            "frame rates differ: {} vs {}",
            a.body.fps, b.body.fps
        )));
    }
    Ok(())
}

/// Flat indices of points that participate in the cut-point distance.
fn distance_points(pose: &Pose, config: &StitchConfig) -> Vec<usize> {
    let mut included = Vec::new();
    let mut offset = 0;
    for c in &pose.header.components {
        if !config.exclude_from_distance.iter().any(|e| e == &c.name) {
            included.extend(offset..offset + c.point_count());
        }
        offset += c.point_count();
    }
    // Never exclude everything: fall back to the full point set.
    if included.is_empty() {
        (0..pose.body.points()).collect()
    } else {
        included
    }
}

/// Mean-normalized L2 distance between frame `fa` of `a` and frame `fb` of
/// `b`, over the given points present in both. `None` when no point is
/// shared.
fn frame_distance(a: &Pose, fa: usize, b: &Pose, fb: usize, points: &[usize]) -> Option<f64> {
    let axes = a.body.axes().min(b.body.axes());
    let mut sq = 0.0f64;
    let mut count = 0usize;
    for p in 0..a.body.people() as usize {
        for &pt in points {
            if !a.body.is_present(fa, p, pt) || !b.body.is_present(fb, p, pt) {
                continue;
            }
            let ca = a.body.coords(fa, p, pt);
            let cb = b.body.coords(fb, p, pt);
            for ax in 0..axes {
                let d = ca[ax] as f64 - cb[ax] as f64;
                sq += d * d;
            }
            count += 1;
        }
    }
    (count > 0).then(|| sq.sqrt() / count as f64)
}

/// Searches the last `window` frames of `a` against the first `window`
/// frames of `b` for the pair minimizing [`frame_distance`]. Ties prefer a
/// larger index in `a`, then a smaller index in `b` (keep more of `a`, cut
/// less of `b`).
pub fn find_stitch_point(a: &Pose, b: &Pose, config: &StitchConfig) -> Result<(usize, usize), StitchError> {
    check_schema(a, b)?;
    if a.frames() == 0 || b.frames() == 0 {
        return Err(StitchError::EmptyInput);
    }
    let points = distance_points(a, config);
    let wa = config.window(a.frames());
    let wb = config.window(b.frames());

    let mut best: Option<(f64, usize, usize)> = None;
    for i in a.frames() - wa..a.frames() {
        for j in 0..wb {
            let Some(d) = frame_distance(a, i, b, j, &points) else {
                continue;
            };
            let better = match best {
                None => true,
                Some((bd, bi, bj)) => {
                    d < bd || (d == bd && (i > bi || (i == bi && j < bj)))
                }
            };
            if better {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j)).ok_or(StitchError::NoSharedPoints)
}

/// Fills gaps in each point's trajectory: interior gaps by linear
/// interpolation (confidence = the minimum of the flanking confidences),
/// leading and trailing gaps by holding the nearest present frame. Points
/// never present stay missing.
pub fn fill_missing(pose: &Pose) -> Pose {
    let body = &pose.body;
    let mut out = pose.clone();
    let frames = body.frames();
    let axes = body.axes();

    for p in 0..body.people() as usize {
        for pt in 0..body.points() {
            let present: Vec<usize> = (0..frames).filter(|&f| body.is_present(f, p, pt)).collect();
            if present.is_empty() || present.len() == frames {
                continue;
            }
            let first = present[0];
            let last = *present.last().unwrap();
            for f in 0..first {
                let (src_coords, src_conf) = (body.coords(first, p, pt).to_vec(), body.conf(first, p, pt));
                out.body.coords_mut(f, p, pt).copy_from_slice(&src_coords);
                out.body.set_conf(f, p, pt, src_conf);
            }
            for f in last + 1..frames {
                let (src_coords, src_conf) = (body.coords(last, p, pt).to_vec(), body.conf(last, p, pt));
                out.body.coords_mut(f, p, pt).copy_from_slice(&src_coords);
                out.body.set_conf(f, p, pt, src_conf);
            }
            for pair in present.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                if hi == lo + 1 {
                    continue;
                }
                let conf = body.conf(lo, p, pt).min(body.conf(hi, p, pt));
                for f in lo + 1..hi {
                    let t = (f - lo) as f64 / (hi - lo) as f64;
                    for ax in 0..axes {
                        let a = body.coords(lo, p, pt)[ax] as f64;
                        let b = body.coords(hi, p, pt)[ax] as f64;
                        out.body.coords_mut(f, p, pt)[ax] = (a * (1.0 - t) + b * t) as f32;
                    }
                    out.body.set_conf(f, p, pt, conf);
                }
            }
        }
    }
    out
}

/// Trims every clip, cuts consecutive pairs at their stitch points,
/// concatenates with `round(padding_seconds * fps)` gap frames, fills the
/// gaps with an ease-in/ease-out cubic between the flanking frames,
/// interpolates remaining missing keypoints, and smooths the whole sequence.
pub fn stitch(clips: &[Pose], config: &StitchConfig) -> Result<Pose, StitchError> {
    let first = clips.first().ok_or(StitchError::EmptyInput)?;
    for clip in &clips[1..] {
        check_schema(first, clip)?;
    }

    let trimmed: Vec<Pose> = clips.iter().map(|c| trim_pose(c, config)).collect();

    // Kept range per clip: [entry cut, exit cut].
    let mut cuts = Vec::with_capacity(trimmed.len().saturating_sub(1));
    for pair in trimmed.windows(2) {
        cuts.push(find_stitch_point(&pair[0], &pair[1], config)?);
    }
    let mut kept: Vec<(usize, usize)> = Vec::with_capacity(trimmed.len());
    for (k, clip) in trimmed.iter().enumerate() {
        let start = if k == 0 { 0 } else { cuts[k - 1].1 };
        let end = if k == trimmed.len() - 1 { clip.frames() - 1 } else { cuts[k].0 };
        // Degenerate overlap of entry and exit cuts on a short clip.
        let start = start.min(clip.frames() - 1);
        let end = end.max(start);
        kept.push((start, end));
    }

    let fps = first.body.fps;
    let gap = config.gap_frames(fps);
    let people = first.body.people() as usize;
    let points = first.body.points();
    let axes = first.body.axes();

    let mut data: Vec<f32> = Vec::new();
    let mut confidence: Vec<f32> = Vec::new();

    fn push_frame(data: &mut Vec<f32>, confidence: &mut Vec<f32>, clip: &Pose, f: usize) {
        for p in 0..clip.body.people() as usize {
            for pt in 0..clip.body.points() {
                data.extend_from_slice(clip.body.coords(f, p, pt));
                confidence.push(clip.body.conf(f, p, pt));
            }
        }
    }

    for (k, clip) in trimmed.iter().enumerate() {
        if k > 0 && gap > 0 {
            // Ease between the previous kept frame and this clip's first
            // kept frame: h(t) = 3t^2 - 2t^3 has zero end velocities.
            let prev = &trimmed[k - 1];
            let (pa, fa) = (prev, kept[k - 1].1);
            let (pb, fb) = (clip, kept[k].0);
            for g in 1..=gap {
                let t = g as f64 / (gap + 1) as f64;
                let h = t * t * (3.0 - 2.0 * t);
                for p in 0..people {
                    for pt in 0..points {
                        if pa.body.is_present(fa, p, pt) && pb.body.is_present(fb, p, pt) {
                            let ca = pa.body.coords(fa, p, pt);
                            let cb = pb.body.coords(fb, p, pt);
                            for ax in 0..axes {
                                data.push((ca[ax] as f64 * (1.0 - h) + cb[ax] as f64 * h) as f32);
                            }
                            confidence.push(pa.body.conf(fa, p, pt).min(pb.body.conf(fb, p, pt)));
                        } else {
                            data.extend(std::iter::repeat(0.0).take(axes));
                            confidence.push(0.0);
                        }
                    }
                }
            }
        }
        for f in kept[k].0..=kept[k].1 {
            push_frame(&mut data, &mut confidence, clip, f);
        }
    }

    let frames = confidence.len() / (people * points).max(1);
    let body = crate::container::PoseBody::new(fps, first.body.people(), frames, points, axes, data, confidence)
        .expect("assembled body shape is consistent");
    let assembled = Pose::new(first.header.clone(), body).expect("header unchanged");

    let filled = fill_missing(&assembled);

    // Clamp the smoothing window to the sequence; skip smoothing when the
    // result would be too short to fit the polynomial.
    let mut window = config.savgol_window.min(filled.frames());
    if window % 2 == 0 {
        window = window.saturating_sub(1);
    }
    if window > config.savgol_polyorder && window >= 3 {
        Ok(savgol_smooth(&filled, window, config.savgol_polyorder)?)
    } else {
        Ok(filled)
    }
}

/// Translates a hand component per frame so that its `WRIST` point coincides
/// with the named body point, as a preprocessing step before stitching.
pub fn align_wrist(
    pose: &Pose,
    hand_component: &str,
    body_wrist_point: &str,
) -> Result<Pose, StitchError> {
    let hand = pose
        .header
        .component(hand_component)
        .ok_or_else(|| StitchError::UnknownComponent(hand_component.to_string()))?;
    let hand_offset = pose.header.component_offset(hand_component).unwrap();
    let hand_points = hand.point_count();
    let wrist_local = hand
        .point_names
        .iter()
        .position(|n| n == "WRIST")
        .ok_or_else(|| StitchError::UnknownPoint {
            component: hand_component.to_string(),
            point: "WRIST".to_string(),
        })?;
    let (_, body_wrist) = pose
        .header
        .find_point(body_wrist_point)
        .ok_or_else(|| StitchError::UnknownPoint {
            component: "body".to_string(),
            point: body_wrist_point.to_string(),
        })?;

    let axes = pose.body.axes();
    let mut out = pose.clone();
    for f in 0..pose.frames() {
        for p in 0..pose.body.people() as usize {
            let hand_wrist = hand_offset + wrist_local;
            if !pose.body.is_present(f, p, hand_wrist) || !pose.body.is_present(f, p, body_wrist) {
                continue;
            }
            let target = pose.body.coords(f, p, body_wrist).to_vec();
            let current = pose.body.coords(f, p, hand_wrist).to_vec();
            for pt in hand_offset..hand_offset + hand_points {
                if !pose.body.is_present(f, p, pt) {
                    continue;
                }
                let c = out.body.coords_mut(f, p, pt);
                for ax in 0..axes {
                    c[ax] = (c[ax] as f64 + target[ax] as f64 - current[ax] as f64) as f32;
                }
            }
        }
    }
    Ok(out)
}

/// Largest frame-to-frame point displacement inside a frame range, used to
/// compare junction smoothness. Only points present in both frames count.
pub fn max_jump(pose: &Pose, from_frame: usize, to_frame: usize) -> f64 {
    let body = &pose.body;
    let axes = body.axes();
    let mut worst = 0.0f64;
    for f in from_frame.max(1)..=to_frame.min(body.frames().saturating_sub(1)) {
        for p in 0..body.people() as usize {
            for pt in 0..body.points() {
                if !body.is_present(f - 1, p, pt) || !body.is_present(f, p, pt) {
                    continue;
                }
                let a = body.coords(f - 1, p, pt);
                let b = body.coords(f, p, pt);
                let mut sq = 0.0;
                for ax in 0..axes {
                    let d = b[ax] as f64 - a[ax] as f64;
                    sq += d * d;
                }
                worst = worst.max(sq.sqrt());
            }
        }
    }
    worst
}
