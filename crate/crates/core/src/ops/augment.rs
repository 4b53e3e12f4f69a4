//! Affine augmentation, frame dropout and coordinate noise.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::container::{Pose, PoseBody};

/// Parameters of the 2-D affine augmentation. Applied to the first two axes
/// in the order: rotation, scale, shear, reflection, translation, all about
/// the coordinate origin.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineParams {
    pub rotation_deg: f64,
    pub scale: f64,
    pub shear_x: f64,
    pub shear_y: f64,
    pub translate: [f64; 2],
    pub reflect_x: bool,
}

impl Default for AffineParams {
    fn default() -> Self {
        Self {
            rotation_deg: 0.0,
            scale: 1.0,
            shear_x: 0.0,
            shear_y: 0.0,
            translate: [0.0, 0.0],
            reflect_x: false,
        }
    }
}

impl AffineParams {
    /// Combined 2x2 linear part (reflect * shear * scale * rotation).
    fn linear(&self) -> [[f64; 2]; 2] {
        let theta = self.rotation_deg.to_radians();
        let (sin, cos) = theta.sin_cos();
        // rotation
        let mut m = [[cos, -sin], [sin, cos]];
        // scale
        for row in &mut m {
            for v in row.iter_mut() {
                *v *= self.scale;
            }
        }
        // shear: [[1, sx], [sy, 1]] applied after scale
        let sheared = [
            [m[0][0] + self.shear_x * m[1][0], m[0][1] + self.shear_x * m[1][1]],
            [m[1][0] + self.shear_y * m[0][0], m[1][1] + self.shear_y * m[0][1]],
        ];
        let mut m = sheared;
        if self.reflect_x {
            m[0][0] = -m[0][0];
            m[0][1] = -m[0][1];
        }
        m
    }
}

/// Applies the 2-D affine map to the first two axes of every present point.
/// Higher axes, missing points and confidences are untouched.
pub fn affine_augment(pose: &Pose, params: &AffineParams) -> Pose {
    assert!(params.scale > 0.0, "scale must be positive");
    let m = params.linear();
    let mut out = pose.clone();
    let body = &pose.body;
    if body.axes() < 2 {
        return out;
    }
    for f in 0..body.frames() {
        for p in 0..body.people() as usize {
            for pt in 0..body.points() {
                if !body.is_present(f, p, pt) {
                    continue;
                }
                let c = out.body.coords_mut(f, p, pt);
                let (x, y) = (c[0] as f64, c[1] as f64);
                c[0] = (m[0][0] * x + m[0][1] * y + params.translate[0]) as f32;
                c[1] = (m[1][0] * x + m[1][1] * y + params.translate[1]) as f32;
            }
        }
    }
    out
}

/// Removes each frame independently with probability `p` (seeded, so the
/// retained index set is reproducible). At least one frame is always kept;
/// fps is unchanged.
pub fn frame_dropout(pose: &Pose, p: f64, seed: u64) -> Pose {
    assert!((0.0..1.0).contains(&p), "dropout probability must be in [0, 1)");
    let frames = pose.frames();
    if frames == 0 {
        return pose.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<usize> = (0..frames).filter(|_| !rng.random_bool(p)).collect();
    if kept.is_empty() {
        kept.push(0);
    }
    keep_frames(pose, &kept)
}

/// Builds a new pose from the given (sorted) frame indices.
pub(crate) fn keep_frames(pose: &Pose, kept: &[usize]) -> Pose {
    let body = &pose.body;
    let people = body.people() as usize;
    let points = body.points();
    let axes = body.axes();
    let mut data = Vec::with_capacity(kept.len() * people * points * axes);
    let mut confidence = Vec::with_capacity(kept.len() * people * points);
    for &f in kept {
        let c0 = f * people * points * axes;
        data.extend_from_slice(&body.data()[c0..c0 + people * points * axes]);
        let k0 = f * people * points;
        confidence.extend_from_slice(&body.confidences()[k0..k0 + people * points]);
    }
    let new_body = PoseBody::new(body.fps, body.people(), kept.len(), points, axes, data, confidence)
        .expect("frame subset preserves shape");
    Pose::new(pose.header.clone(), new_body).expect("header unchanged")
}

/// Adds zero-mean Gaussian noise of standard deviation `sigma` to every
/// coordinate of every present point. Missing points stay missing and draw
/// nothing from the generator.
pub fn gaussian_noise(pose: &Pose, sigma: f64, seed: u64) -> Pose {
    assert!(sigma >= 0.0, "sigma must be non-negative");
    let mut out = pose.clone();
    if sigma == 0.0 {
        return out;
    }
    let normal = Normal::new(0.0f64, sigma).expect("sigma checked above");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body = &pose.body;
    for f in 0..body.frames() {
        for p in 0..body.people() as usize {
            for pt in 0..body.points() {
                if !body.is_present(f, p, pt) {
                    continue;
                }
                for v in out.body.coords_mut(f, p, pt) {
                    *v = (*v as f64 + normal.sample(&mut rng)) as f32;
                }
            }
        }
    }
    out
}
