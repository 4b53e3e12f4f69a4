//! 3-D hand analysis: plane/rotation/view estimation, canonical-orientation
//! normalization, and the multi-view / crop consistency metrics.
//!
//! A hand is 21 named landmarks in the standard estimator order: the wrist,
//! then four joints per finger (thumb CMC/MCP/IP/TIP, other fingers
//! MCP/PIP/DIP/TIP). All hand math runs in f64.

use nalgebra::{Rotation3, Vector3};
use thiserror::Error;

use crate::ops::rotation_to_z;

/// Landmark count of one hand.
pub const HAND_LANDMARKS: usize = 21;

/// Canonical metacarpal length after normalization.
pub const METACARPAL_LENGTH: f64 = 200.0;

/// Landmark indices in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum Landmark {
    Wrist = 0,
    ThumbCmc = 1,
    ThumbMcp = 2,
    ThumbIp = 3,
    ThumbTip = 4,
    IndexMcp = 5,
    IndexPip = 6,
    IndexDip = 7,
    IndexTip = 8,
    MiddleMcp = 9,
    MiddlePip = 10,
    MiddleDip = 11,
    MiddleTip = 12,
    RingMcp = 13,
    RingPip = 14,
    RingDip = 15,
    RingTip = 16,
    PinkyMcp = 17,
    PinkyPip = 18,
    PinkyDip = 19,
    PinkyTip = 20,
}

/// Canonical landmark names, aligned with [`Landmark`] and with the hand
/// components produced by the OpenPose adapter.
pub const LANDMARK_NAMES: [&str; HAND_LANDMARKS] = [
    "WRIST",
    "THUMB_CMC",
    "THUMB_MCP",
    "THUMB_IP",
    "THUMB_TIP",
    "INDEX_FINGER_MCP",
    "INDEX_FINGER_PIP",
    "INDEX_FINGER_DIP",
    "INDEX_FINGER_TIP",
    "MIDDLE_FINGER_MCP",
    "MIDDLE_FINGER_PIP",
    "MIDDLE_FINGER_DIP",
    "MIDDLE_FINGER_TIP",
    "RING_FINGER_MCP",
    "RING_FINGER_PIP",
    "RING_FINGER_DIP",
    "RING_FINGER_TIP",
    "PINKY_MCP",
    "PINKY_PIP",
    "PINKY_DIP",
    "PINKY_TIP",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Left,
    Right,
}

/// Wall: the hand is parallel to a wall; Floor: parallel to the floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Wall,
    Floor,
}

/// Side of the hand facing the camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Front,
    Sideways,
    Back,
}

#[derive(Debug, Error)]
pub enum HandError {
    #[error("landmark {0} is missing (confidence 0)")]
    MissingLandmark(&'static str),
    #[error("wrist-to-metacarpal projection is degenerate")]
    DegenerateDirection,
    #[error("palm landmarks are collinear")]
    CollinearLandmarks,
    #[error("metacarpal bone has near-zero length")]
    DegenerateMetacarpal,
    #[error("fewer than 2 usable observations")]
    InsufficientObservations,
}

/// One hand: 21 landmarks with confidences and a handedness tag.
#[derive(Debug, Clone, PartialEq)]
pub struct HandPose {
    pub landmarks: [[f64; 3]; HAND_LANDMARKS],
    pub confidence: [f64; HAND_LANDMARKS],
    pub handedness: Handedness,
}

impl HandPose {
    pub fn new(landmarks: [[f64; 3]; HAND_LANDMARKS], handedness: Handedness) -> Self {
        Self { landmarks, confidence: [1.0; HAND_LANDMARKS], handedness }
    }

    #[inline]
    pub fn point(&self, l: Landmark) -> Vector3<f64> {
        let p = self.landmarks[l as usize];
        Vector3::new(p[0], p[1], p[2])
    }

    #[inline]
    fn present(&self, l: Landmark) -> bool {
        self.confidence[l as usize] > 0.0
    }

    fn require(&self, l: Landmark) -> Result<Vector3<f64>, HandError> {
        if !self.present(l) {
            return Err(HandError::MissingLandmark(LANDMARK_NAMES[l as usize]));
        }
        Ok(self.point(l))
    }

    fn apply(&self, f: impl Fn(Vector3<f64>) -> Vector3<f64>) -> HandPose {
        let mut out = self.clone();
        for (i, lm) in out.landmarks.iter_mut().enumerate() {
            let v = f(Vector3::new(
                self.landmarks[i][0],
                self.landmarks[i][1],
                self.landmarks[i][2],
            ));
            *lm = [v.x, v.y, v.z];
        }
        out
    }
}

/// A set of observations of the same hand shape (different views or crops).
#[derive(Debug, Clone, PartialEq)]
pub struct HandShapeGroup {
    pub shape_id: String,
    pub observations: Vec<HandPose>,
}

/// Hand plane estimation: wall iff `|M_MCP.y - WRIST.y| * 1.5` strictly
/// exceeds `|M_MCP.z - WRIST.z|`; ties fall to floor.
pub fn estimate_plane(hand: &HandPose) -> Result<Plane, HandError> {
    let wrist = hand.require(Landmark::Wrist)?;
    let m_mcp = hand.require(Landmark::MiddleMcp)?;
    let y = (m_mcp.y - wrist.y).abs() * 1.5;
    let z = (m_mcp.z - wrist.z).abs();
    Ok(if y > z { Plane::Wall } else { Plane::Floor })
}

/// Rotation of the wrist-to-metacarpal line, grouped into eight 45-degree
/// bins centered on the category directions: bin `k` covers
/// `[45k - 22.5, 45k + 22.5)` degrees, measured from +Y toward +X in the XY
/// plane for wall hands and in the XZ plane for floor hands.
pub fn estimate_rotation_bin(hand: &HandPose) -> Result<u8, HandError> {
    let wrist = hand.require(Landmark::Wrist)?;
    let m_mcp = hand.require(Landmark::MiddleMcp)?;
    let d = m_mcp - wrist;
    let (u, v) = match estimate_plane(hand)? {
        Plane::Wall => (d.x, d.y),
        Plane::Floor => (d.x, d.z),
    };
    if u.hypot(v) < 1e-12 {
        return Err(HandError::DegenerateDirection);
    }
    let mut angle = u.atan2(v).to_degrees();
    if angle < 0.0 {
        angle += 360.0;
    }
    Ok((((angle + 22.5) / 45.0).floor() as u64 % 8) as u8)
}

/// Palm-plane normal from wrist, index MCP and pinky MCP, in that winding.
fn palm_normal(hand: &HandPose) -> Result<Vector3<f64>, HandError> {
    let wrist = hand.require(Landmark::Wrist)?;
    let i_mcp = hand.require(Landmark::IndexMcp)?;
    let p_mcp = hand.require(Landmark::PinkyMcp)?;
    let normal = (i_mcp - wrist).cross(&(p_mcp - wrist));
    if normal.norm() < 1e-12 {
        return Err(HandError::CollinearLandmarks);
    }
    Ok(normal)
}

/// Hand view estimation. For wall hands the normal angle
/// `atan2(normal.z, normal.x)` is taken in `[0, 360)`: front above 210,
/// sideways above 150, back otherwise. For floor hands
/// `atan2(normal.y, normal.x)` is taken in `(-180, 180]`: front above 0,
/// sideways above -60, back otherwise.
pub fn estimate_view(hand: &HandPose) -> Result<View, HandError> {
    let normal = palm_normal(hand)?;
    Ok(match estimate_plane(hand)? {
        Plane::Wall => {
            let mut angle = normal.z.atan2(normal.x).to_degrees();
            if angle < 0.0 {
                angle += 360.0;
            }
            if angle > 210.0 {
                View::Front
            } else if angle > 150.0 {
                View::Sideways
            } else {
                View::Back
            }
        }
        Plane::Floor => {
            let angle = normal.y.atan2(normal.x).to_degrees();
            if angle > 0.0 {
                View::Front
            } else if angle > -60.0 {
                View::Sideways
            } else {
                View::Back
            }
        }
    })
}

/// Brings a hand to the canonical position, in order: rotate the back-of-hand
/// normal onto +Z (the palm plane becomes the XY plane), rotate about Z so
/// the middle metacarpal lies on +Y, scale it to length 200, and translate
/// the wrist to the origin.
///
/// The back-of-hand normal is `(I_MCP - WRIST) x (P_MCP - WRIST)` for a right
/// hand and its negation for a left hand, so mirror-image hands normalize to
/// mirror-image results.
pub fn normalize_hand_3d(hand: &HandPose) -> Result<HandPose, HandError> {
    let wrist = hand.require(Landmark::Wrist)?;
    let m_mcp = hand.require(Landmark::MiddleMcp)?;

    let mut normal = palm_normal(hand)?;
    if hand.handedness == Handedness::Left {
        normal = -normal;
    }
    let metacarpal = m_mcp - wrist;
    if metacarpal.norm() <= 1e-9 {
        return Err(HandError::DegenerateMetacarpal);
    }

    let r_plane = rotation_to_z(&normal);
    let d = r_plane * metacarpal;
    // Rz(atan2(dx, dy)) carries (sin a, cos a) onto +Y.
    let r_inplane = Rotation3::from_axis_angle(&Vector3::z_axis(), d.x.atan2(d.y));
    let rotation = r_inplane * r_plane;
    let scale = METACARPAL_LENGTH / metacarpal.norm();
    let origin = rotation * wrist * scale;

    Ok(hand.apply(|p| rotation * p * scale - origin))
}

/// Per-landmark deviation (root mean squared distance to the landmark's
/// centroid across observations), averaged over the 21 landmarks.
fn mean_landmark_deviation(observations: &[HandPose]) -> f64 {
    let n = observations.len() as f64;
    let mut total = 0.0;
    for l in 0..HAND_LANDMARKS {
        let mut centroid = Vector3::zeros();
        for obs in observations {
            centroid += Vector3::from(obs.landmarks[l]);
        }
        centroid /= n;
        let msd: f64 = observations
            .iter()
            .map(|obs| (Vector3::from(obs.landmarks[l]) - centroid).norm_squared())
            .sum::<f64>()
            / n;
        total += msd.sqrt();
    }
    total / HAND_LANDMARKS as f64
}

/// Multi-angle consistency error: every observation is 3-D normalized, then
/// the averaged per-landmark deviation is computed. Observations that fail
/// normalization are dropped with a warning; fewer than two survivors is an
/// error.
pub fn mace(group: &HandShapeGroup) -> Result<f64, HandError> {
    let mut normalized = Vec::with_capacity(group.observations.len());
    for (i, obs) in group.observations.iter().enumerate() {
        match normalize_hand_3d(obs) {
            Ok(h) => normalized.push(h),
            Err(e) => {
                log::warn!("shape {:?}: dropping observation {i}: {e}", group.shape_id);
            }
        }
    }
    if normalized.len() < 2 {
        return Err(HandError::InsufficientObservations);
    }
    Ok(mean_landmark_deviation(&normalized))
}

/// Crop consistency error: observations are only translated so the wrist
/// sits at the origin (no rotation or scaling), then the same averaged
/// per-landmark deviation is computed.
pub fn cce(group: &HandShapeGroup) -> Result<f64, HandError> {
    if group.observations.len() < 2 {
        return Err(HandError::InsufficientObservations);
    }
    let shifted: Vec<HandPose> = group
        .observations
        .iter()
        .map(|obs| {
            let wrist = obs.point(Landmark::Wrist);
            obs.apply(|p| p - wrist)
        })
        .collect();
    Ok(mean_landmark_deviation(&shifted))
}

/// A flat, coplanar-palm right hand in canonical position, used as a test
/// and fixture shape: wrist at the origin, middle metacarpal at (0, 200, 0),
/// fingers fanned in the XY plane.
pub fn canonical_hand() -> HandPose {
    let mut lm = [[0.0f64; 3]; HAND_LANDMARKS];
    let finger = |mcp_x: f64, mcp_y: f64, dir_x: f64| -> [[f64; 3]; 4] {
        let step = 45.0;
        let norm = (dir_x * dir_x + 1.0f64).sqrt();
        let (dx, dy) = (dir_x / norm, 1.0 / norm);
        [
            [mcp_x, mcp_y, 0.0],
            [mcp_x + dx * step, mcp_y + dy * step, 0.0],
            [mcp_x + dx * 2.0 * step, mcp_y + dy * 2.0 * step, 0.0],
            [mcp_x + dx * 3.0 * step, mcp_y + dy * 3.0 * step, 0.0],
        ]
    };

    lm[Landmark::Wrist as usize] = [0.0, 0.0, 0.0];
    // Index-to-pinky runs +X to -X so the right-hand back normal
    // (I_MCP - WRIST) x (P_MCP - WRIST) points along +Z.
    let thumb = finger(60.0, 60.0, 0.9);
    lm[Landmark::ThumbCmc as usize] = thumb[0];
    lm[Landmark::ThumbMcp as usize] = thumb[1];
    lm[Landmark::ThumbIp as usize] = thumb[2];
    lm[Landmark::ThumbTip as usize] = thumb[3];
    let index = finger(40.0, 190.0, 0.15);
    lm[Landmark::IndexMcp as usize] = index[0];
    lm[Landmark::IndexPip as usize] = index[1];
    lm[Landmark::IndexDip as usize] = index[2];
    lm[Landmark::IndexTip as usize] = index[3];
    let middle = finger(0.0, 200.0, 0.0);
    lm[Landmark::MiddleMcp as usize] = middle[0];
    lm[Landmark::MiddlePip as usize] = middle[1];
    lm[Landmark::MiddleDip as usize] = middle[2];
    lm[Landmark::MiddleTip as usize] = middle[3];
    let ring = finger(-40.0, 190.0, -0.15);
    lm[Landmark::RingMcp as usize] = ring[0];
    lm[Landmark::RingPip as usize] = ring[1];
    lm[Landmark::RingDip as usize] = ring[2];
    lm[Landmark::RingTip as usize] = ring[3];
    let pinky = finger(-75.0, 170.0, -0.35);
    lm[Landmark::PinkyMcp as usize] = pinky[0];
    lm[Landmark::PinkyPip as usize] = pinky[1];
    lm[Landmark::PinkyDip as usize] = pinky[2];
    lm[Landmark::PinkyTip as usize] = pinky[3];

    HandPose::new(lm, Handedness::Right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn offset_hand(dy: f64, dz: f64) -> HandPose {
        let mut lm = [[1.0f64; 3]; HAND_LANDMARKS];
        lm[Landmark::Wrist as usize] = [0.0, 0.0, 0.0];
        lm[Landmark::MiddleMcp as usize] = [0.0, dy, dz];
        HandPose::new(lm, Handedness::Right)
    }

    #[test]
    fn plane_follows_the_biased_comparison() {
        assert_eq!(estimate_plane(&offset_hand(10.0, 0.0)).unwrap(), Plane::Wall);
        assert_eq!(estimate_plane(&offset_hand(1.0, 10.0)).unwrap(), Plane::Floor);
        // Boundary: y * 1.5 == z is not strictly greater, so floor.
        assert_eq!(estimate_plane(&offset_hand(2.0, 3.0)).unwrap(), Plane::Floor);
    }

    #[test]
    fn missing_landmark_is_reported() {
        let mut hand = offset_hand(10.0, 0.0);
        hand.confidence[Landmark::MiddleMcp as usize] = 0.0;
        assert!(matches!(estimate_plane(&hand), Err(HandError::MissingLandmark(_))));
    }

    #[test]
    fn rotation_bins_are_centered() {
        let at_angle = |deg: f64| {
            let rad = deg.to_radians();
            offset_hand_xy(rad.sin() * 10.0, rad.cos() * 10.0)
        };
        assert_eq!(estimate_rotation_bin(&at_angle(0.0)).unwrap(), 0);
        assert_eq!(estimate_rotation_bin(&at_angle(90.0)).unwrap(), 2);
        // Boundaries are inclusive below: 22.5 is bin 1's lower edge, and
        // -22.5 (= 337.5) is bin 0's.
        assert_eq!(estimate_rotation_bin(&at_angle(22.5)).unwrap(), 1);
        assert_eq!(estimate_rotation_bin(&at_angle(-22.5)).unwrap(), 0);
        assert_eq!(estimate_rotation_bin(&at_angle(-23.0)).unwrap(), 7);
    }

    fn offset_hand_xy(dx: f64, dy: f64) -> HandPose {
        let mut lm = [[1.0f64; 3]; HAND_LANDMARKS];
        lm[Landmark::Wrist as usize] = [0.0, 0.0, 0.0];
        lm[Landmark::MiddleMcp as usize] = [dx, dy, 0.0];
        HandPose::new(lm, Handedness::Right)
    }

    fn view_hand(plane: Plane, normal_angle_deg: f64) -> HandPose {
        // Wrist at origin, I_MCP and P_MCP chosen so that the palm normal
        // (I-W) x (P-W) points at the requested angle in the relevant plane.
        let rad = normal_angle_deg.to_radians();
        let normal = match plane {
            Plane::Wall => Vector3::new(rad.cos(), 0.0, rad.sin()),
            Plane::Floor => Vector3::new(rad.cos(), rad.sin(), 0.0),
        };
        // Two vectors orthogonal to the normal, ordered so that
        // (i_mcp - wrist) x (p_mcp - wrist) points along +normal.
        let seed = if normal.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let u = normal.cross(&seed).normalize();
        let v = normal.cross(&u).normalize();
        let mut i_mcp = u;
        let mut p_mcp = v;
        if i_mcp.cross(&p_mcp).dot(&normal) < 0.0 {
            std::mem::swap(&mut i_mcp, &mut p_mcp);
        }
        let mut lm = [[0.0f64; 3]; HAND_LANDMARKS];
        lm[Landmark::IndexMcp as usize] = [i_mcp.x * 10.0, i_mcp.y * 10.0, i_mcp.z * 10.0];
        lm[Landmark::PinkyMcp as usize] = [p_mcp.x * 10.0, p_mcp.y * 10.0, p_mcp.z * 10.0];
        // Place M_MCP to force the requested plane.
        lm[Landmark::MiddleMcp as usize] = match plane {
            Plane::Wall => [0.0, 50.0, 0.0],
            Plane::Floor => [0.0, 0.0, 50.0],
        };
        HandPose::new(lm, Handedness::Right)
    }

    #[test]
    fn view_thresholds_match_the_branch_tables() {
        assert_eq!(estimate_view(&view_hand(Plane::Wall, 300.0)).unwrap(), View::Front);
        assert_eq!(estimate_view(&view_hand(Plane::Wall, 180.0)).unwrap(), View::Sideways);
        assert_eq!(estimate_view(&view_hand(Plane::Wall, 100.0)).unwrap(), View::Back);
        assert_eq!(estimate_view(&view_hand(Plane::Floor, 45.0)).unwrap(), View::Front);
        assert_eq!(estimate_view(&view_hand(Plane::Floor, -30.0)).unwrap(), View::Sideways);
        assert_eq!(estimate_view(&view_hand(Plane::Floor, -90.0)).unwrap(), View::Back);
    }

    #[test]
    fn canonical_hand_is_a_fixed_point() {
        let hand = canonical_hand();
        let out = normalize_hand_3d(&hand).unwrap();
        for l in 0..HAND_LANDMARKS {
            for a in 0..3 {
                assert!(
                    (out.landmarks[l][a] - hand.landmarks[l][a]).abs() < 1e-5,
                    "landmark {l} axis {a}"
                );
            }
        }
    }

    fn random_rigid(hand: &HandPose, rng: &mut impl Rng) -> HandPose {
        let axis = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let rotation = Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(axis),
            rng.random_range(-3.0..3.0),
        );
        let scale: f64 = rng.random_range(0.2..5.0);
        let shift = Vector3::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        hand.apply(|p| rotation * p * scale + shift)
    }

    #[test]
    fn normalization_undoes_rigid_transforms() {
        let canonical = canonical_hand();
        let reference = normalize_hand_3d(&canonical).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..25 {
            let moved = random_rigid(&canonical, &mut rng);
            let out = normalize_hand_3d(&moved).unwrap();
            for l in 0..HAND_LANDMARKS {
                for a in 0..3 {
                    assert!(
                        (out.landmarks[l][a] - reference.landmarks[l][a]).abs() < 1e-4,
                        "landmark {l} axis {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let moved = random_rigid(&canonical_hand(), &mut rng);
        let once = normalize_hand_3d(&moved).unwrap();
        let twice = normalize_hand_3d(&once).unwrap();
        for l in 0..HAND_LANDMARKS {
            for a in 0..3 {
                assert!((once.landmarks[l][a] - twice.landmarks[l][a]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn normalized_invariants_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let out = normalize_hand_3d(&random_rigid(&canonical_hand(), &mut rng)).unwrap();
        let wrist = out.point(Landmark::Wrist);
        let m_mcp = out.point(Landmark::MiddleMcp);
        assert!(wrist.norm() < 1e-6);
        assert!(m_mcp.x.abs() < 1e-6 && m_mcp.z.abs() < 1e-6);
        assert!((m_mcp.y - METACARPAL_LENGTH).abs() < 1e-3);
    }

    #[test]
    fn mirror_hands_normalize_to_mirror_shapes() {
        let right = canonical_hand();
        let mut left = right.apply(|p| Vector3::new(-p.x, p.y, p.z));
        left.handedness = Handedness::Left;
        let right_norm = normalize_hand_3d(&right).unwrap();
        let left_norm = normalize_hand_3d(&left).unwrap();
        for l in 0..HAND_LANDMARKS {
            assert!((left_norm.landmarks[l][0] + right_norm.landmarks[l][0]).abs() < 1e-4);
            assert!((left_norm.landmarks[l][1] - right_norm.landmarks[l][1]).abs() < 1e-4);
            assert!((left_norm.landmarks[l][2] - right_norm.landmarks[l][2]).abs() < 1e-4);
        }
    }

    #[test]
    fn collinear_palm_is_rejected() {
        let mut lm = [[0.0f64; 3]; HAND_LANDMARKS];
        lm[Landmark::IndexMcp as usize] = [1.0, 0.0, 0.0];
        lm[Landmark::PinkyMcp as usize] = [2.0, 0.0, 0.0];
        lm[Landmark::MiddleMcp as usize] = [0.0, 10.0, 0.0];
        let hand = HandPose::new(lm, Handedness::Right);
        assert!(matches!(normalize_hand_3d(&hand), Err(HandError::CollinearLandmarks)));
    }

    #[test]
    fn mace_of_identical_observations_is_zero() {
        let group = HandShapeGroup {
            shape_id: "dup".into(),
            observations: vec![canonical_hand(); 6],
        };
        assert!(mace(&group).unwrap() < 1e-9);
    }

    #[test]
    fn mace_removes_rigid_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let canonical = canonical_hand();
        let observations: Vec<HandPose> =
            (0..6).map(|_| random_rigid(&canonical, &mut rng)).collect();
        let group = HandShapeGroup { shape_id: "rigid".into(), observations };
        assert!(mace(&group).unwrap() <= 1e-3);
    }

    #[test]
    fn mace_of_single_landmark_offset_is_five_over_21() {
        let a = normalize_hand_3d(&canonical_hand()).unwrap();
        let mut b = a.clone();
        b.landmarks[Landmark::ThumbTip as usize][0] += 10.0;
        let group = HandShapeGroup { shape_id: "offset".into(), observations: vec![a, b] };
        let got = mace(&group).unwrap();
        assert!((got - 5.0 / 21.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn mace_drops_broken_observations() {
        let mut broken = canonical_hand();
        broken.confidence[Landmark::Wrist as usize] = 0.0;
        let group = HandShapeGroup {
            shape_id: "drop".into(),
            observations: vec![canonical_hand(), canonical_hand(), broken.clone()],
        };
        assert!(mace(&group).unwrap() < 1e-9);
        let too_few = HandShapeGroup {
            shape_id: "few".into(),
            observations: vec![canonical_hand(), broken],
        };
        assert!(matches!(mace(&too_few), Err(HandError::InsufficientObservations)));
    }

    #[test]
    fn cce_is_translation_but_not_scale_invariant() {
        let base = canonical_hand();
        let shifted = base.apply(|p| p + Vector3::new(17.0, -4.0, 9.0));
        let group = HandShapeGroup {
            shape_id: "shift".into(),
            observations: vec![base.clone(), shifted],
        };
        assert!(cce(&group).unwrap() < 1e-9);

        let scaled = base.apply(|p| p * 2.0);
        let group = HandShapeGroup { shape_id: "scale".into(), observations: vec![base, scaled] };
        assert!(cce(&group).unwrap() > 1.0);
    }
}
