//! Frame rate resampling by linear interpolation.

use crate::container::{Pose, PoseBody};

use super::OpsError;

/// Resamples the pose to `new_fps`. Output frame `j` samples the source at
/// position `j * fps / new_fps`; integer positions copy the source frame
/// bit-exactly, fractional positions interpolate linearly between the two
/// neighbors when the point is present in both (missing in either neighbor
/// makes the output point missing). Positions past the last frame hold it.
pub fn interpolate_fps(pose: &Pose, new_fps: u16) -> Result<Pose, OpsError> {
    if pose.body.fps == 0 || new_fps == 0 {
        return Err(OpsError::ZeroFps);
    }
    let body = &pose.body;
    let frames = body.frames();
    let people = body.people() as usize;
    let points = body.points();
    let axes = body.axes();

    let out_frames = ((frames as f64) * new_fps as f64 / body.fps as f64).round() as usize;
    let mut data = Vec::with_capacity(out_frames * people * points * axes);
    let mut confidence = Vec::with_capacity(out_frames * people * points);

    for j in 0..out_frames {
        let s = (j as f64) * body.fps as f64 / new_fps as f64;
        let lo = s.floor() as usize;
        let (lo, hi, t) = if lo >= frames - 1 {
            (frames - 1, frames - 1, 0.0)
        } else {
            (lo, lo + 1, s - lo as f64)
        };
        if t == 0.0 {
            // Exact sample alignment: copy the source frame untouched.
            for p in 0..people {
                for pt in 0..points {
                    data.extend_from_slice(body.coords(lo, p, pt));
                    confidence.push(body.conf(lo, p, pt));
                }
            }
            continue;
        }
        for p in 0..people {
            for pt in 0..points {
                if body.is_present(lo, p, pt) && body.is_present(hi, p, pt) {
                    let a = body.coords(lo, p, pt);
                    let b = body.coords(hi, p, pt);
                    for ax in 0..axes {
                        data.push((a[ax] as f64 * (1.0 - t) + b[ax] as f64 * t) as f32);
                    }
                    let ca = body.conf(lo, p, pt) as f64;
                    let cb = body.conf(hi, p, pt) as f64;
                    confidence.push((ca * (1.0 - t) + cb * t) as f32);
                } else {
                    data.extend(std::iter::repeat(0.0).take(axes));
                    confidence.push(0.0);
                }
            }
        }
    }

    let new_body = PoseBody::new(new_fps, body.people(), out_frames, points, axes, data, confidence)
        .expect("resampled body shape is consistent");
    Ok(Pose::new(pose.header.clone(), new_body).expect("header unchanged"))
}
