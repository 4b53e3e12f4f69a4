//! Deterministic synthetic pose source for tests, fixtures and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ComponentSpec, Pose, PoseBody, PoseHeader};

/// Fraction of points marked missing (confidence 0) in synthetic data.
const MISSING_FRACTION: f64 = 0.08;

/// Generates a pose with the given component layout, uniform coordinates in
/// `[0, 512)` and confidences in `[0, 1]`, fully determined by `seed`.
///
/// A request with `people == 0` or a zero total point count yields a 0-frame
/// pose, since a body with an empty per-frame payload cannot be serialized.
pub fn generate_synthetic(frames: usize, people: u16, spec: &[ComponentSpec], seed: u64) -> Pose {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let header = PoseHeader {
        version: super::FORMAT_VERSION,
        width: 512,
        height: 512,
        depth: 0,
        components: spec.to_vec(),
    };
    let points = header.total_points();
    let axes = header.axis_count();
    let frames = if people == 0 || points == 0 { 0 } else { frames };

    let n = frames * people as usize * points;
    let mut data = Vec::with_capacity(n * axes);
    let mut confidence = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..axes {
            data.push(rng.random_range(0.0f32..512.0));
        }
        let conf = if rng.random_bool(MISSING_FRACTION) {
            0.0
        } else {
            rng.random_range(0.0f32..=1.0)
        };
        confidence.push(conf);
    }

    let body = PoseBody::new(25, people, frames, points, axes, data, confidence)
        .expect("synthetic body shape is consistent by construction");
    Pose::new(header, body).expect("synthetic header matches its body")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> Vec<ComponentSpec> {
        vec![ComponentSpec::new(
            "BODY",
            "XYC",
            vec!["a".into(), "b".into(), "c".into()],
        )]
    }

    #[test]
    fn zero_frames_is_a_valid_empty_body() {
        let pose = generate_synthetic(0, 1, &spec(), 7);
        assert_eq!(pose.frames(), 0);
        assert!(pose.validate().is_empty());
    }

    #[test]
    fn same_seed_same_pose() {
        let a = generate_synthetic(4, 2, &spec(), 7);
        let b = generate_synthetic(4, 2, &spec(), 7);
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_synthetic(4, 2, &spec(), 1);
        let b = generate_synthetic(4, 2, &spec(), 2);
        assert_ne!(a.body.data(), b.body.data());
    }
}
