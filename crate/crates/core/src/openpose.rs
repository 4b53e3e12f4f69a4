//! OpenPose-style monolithic JSON ingestion and emission.
//!
//! Accepted schema: a top-level object with a `"frames"` map from decimal
//! frame indices to `{"people": [...]}`; each person object holds optional
//! flat `(x, y, c)` arrays `pose_keypoints_2d` (25 points),
//! `face_keypoints_2d` (70), `hand_left_keypoints_2d` and
//! `hand_right_keypoints_2d` (21 each). Optional top-level `fps` (default
//! 25), `width`, `height`, `depth` and `people` round out the pose header;
//! when `people` is absent the maximum person count over all frames is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::container::{ComponentSpec, Pose, PoseBody, PoseHeader};

#[derive(Debug, Error)]
pub enum OpenPoseError {
    #[error("bad schema: {0}")]
    BadSchema(String),
    #[error("frame {frame} person {person}: {component} has {floats} floats, expected {expected} (x, y, c) triples")]
    RaggedKeypoints { frame: String, person: usize, component: &'static str, floats: usize, expected: usize },
    #[error("pose is not expressible in the OpenPose schema: {0}")]
    Inexpressible(String),
}

/// The four known component arrays with their fixed point counts.
const COMPONENTS: [(&str, usize); 4] = [
    ("pose_keypoints_2d", 25),
    ("face_keypoints_2d", 70),
    ("hand_left_keypoints_2d", 21),
    ("hand_right_keypoints_2d", 21),
];

pub const BODY_COMPONENT: &str = COMPONENTS[0].0;
pub const FACE_COMPONENT: &str = COMPONENTS[1].0;
pub const LEFT_HAND_COMPONENT: &str = COMPONENTS[2].0;
pub const RIGHT_HAND_COMPONENT: &str = COMPONENTS[3].0;

/// BODY_25 point names.
const BODY_POINT_NAMES: [&str; 25] = [
    "Nose", "Neck", "RShoulder", "RElbow", "RWrist", "LShoulder", "LElbow", "LWrist", "MidHip",
    "RHip", "RKnee", "RAnkle", "LHip", "LKnee", "LAnkle", "REye", "LEye", "REar", "LEar",
    "LBigToe", "LSmallToe", "LHeel", "RBigToe", "RSmallToe", "RHeel",
];

const BODY_LIMBS: [(u16, u16); 20] = [
    (0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (6, 7), (1, 8), (8, 9), (9, 10), (10, 11),
    (8, 12), (12, 13), (13, 14), (0, 15), (15, 17), (0, 16), (16, 18), (11, 22), (14, 19),
];

const HAND_LIMBS: [(u16, u16); 20] = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (6, 7), (7, 8), (0, 9), (9, 10), (10, 11),
    (11, 12), (0, 13), (13, 14), (14, 15), (15, 16), (0, 17), (17, 18), (18, 19), (19, 20),
];

fn component_spec(name: &str, points: usize) -> ComponentSpec {
    let (point_names, limbs, color) = match name {
        "pose_keypoints_2d" => (
            BODY_POINT_NAMES.iter().map(|s| s.to_string()).collect(),
            BODY_LIMBS.to_vec(),
            (255, 0, 0),
        ),
        "face_keypoints_2d" => (
            (0..points).map(|i| format!("FACE_{i:02}")).collect(),
            Vec::new(),
            (128, 128, 128),
        ),
        "hand_left_keypoints_2d" => (
            crate::hand::LANDMARK_NAMES.iter().map(|s| s.to_string()).collect(),
            HAND_LIMBS.to_vec(),
            (0, 128, 255),
        ),
        "hand_right_keypoints_2d" => (
            crate::hand::LANDMARK_NAMES.iter().map(|s| s.to_string()).collect(),
            HAND_LIMBS.to_vec(),
            (0, 255, 128),
        ),
        _ => unreachable!("only the four known components are constructed"),
    };
    let mut spec = ComponentSpec::new(name, "XYC", point_names);
    spec.limbs = limbs;
    spec.colors = vec![color];
    spec
}

#[derive(Debug, Serialize, Deserialize, Default)]
struct JsonPerson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pose_keypoints_2d: Option<Vec<f32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    face_keypoints_2d: Option<Vec<f32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hand_left_keypoints_2d: Option<Vec<f32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hand_right_keypoints_2d: Option<Vec<f32>>,
}

impl JsonPerson {
    fn array(&self, name: &str) -> Option<&Vec<f32>> {
        match name {
            "pose_keypoints_2d" => self.pose_keypoints_2d.as_ref(),
            "face_keypoints_2d" => self.face_keypoints_2d.as_ref(),
            "hand_left_keypoints_2d" => self.hand_left_keypoints_2d.as_ref(),
            "hand_right_keypoints_2d" => self.hand_right_keypoints_2d.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonFrame {
    people: Vec<JsonPerson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    fps: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    height: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    people: Option<u16>,
    frames: BTreeMap<String, JsonFrame>,
}

/// Parses OpenPose-style JSON into a pose. Frames are ordered by numeric
/// key; people are padded or truncated to the declared count; a keypoint
/// with confidence 0 is missing.
pub fn ingest_openpose(json: &str) -> Result<Pose, OpenPoseError> {
    let doc: JsonDocument =
        serde_json::from_str(json).map_err(|e| OpenPoseError::BadSchema(e.to_string()))?;

    let mut order: Vec<(u64, &String)> = Vec::with_capacity(doc.frames.len());
    for key in doc.frames.keys() {
        let index = key
            .parse::<u64>()
            .map_err(|_| OpenPoseError::BadSchema(format!("frame key {key:?} is not a number")))?;
        order.push((index, key));
    }
    order.sort();

    // Components present anywhere in the document, in canonical order.
    let mut seen = [false; COMPONENTS.len()];
    for frame in doc.frames.values() {
        for person in &frame.people {
            for (i, (name, _)) in COMPONENTS.iter().enumerate() {
                seen[i] |= person.array(name).is_some();
            }
        }
    }
    let active: Vec<(&str, usize)> =
        COMPONENTS.iter().enumerate().filter(|(i, _)| seen[*i]).map(|(_, c)| *c).collect();
    if active.is_empty() && !doc.frames.is_empty() {
        return Err(OpenPoseError::BadSchema("no keypoint arrays in any frame".into()));
    }

    let people = match doc.people {
        Some(p) => p,
        None => doc.frames.values().map(|f| f.people.len()).max().unwrap_or(0) as u16,
    };

    let total_points: usize = active.iter().map(|&(_, n)| n).sum();
    let frames = order.len();
    let mut data = vec![0.0f32; frames * people as usize * total_points * 2];
    let mut confidence = vec![0.0f32; frames * people as usize * total_points];

    for (f, &(_, key)) in order.iter().enumerate() {
        let frame = &doc.frames[key];
        for p in 0..people as usize {
            let Some(person) = frame.people.get(p) else {
                continue; // padded person: everything missing
            };
            let mut offset = 0usize;
            for &(name, expected) in &active {
                if let Some(values) = person.array(name) {
                    if values.len() != expected * 3 {
                        return Err(OpenPoseError::RaggedKeypoints {
                            frame: key.clone(),
                            person: p,
                            component: COMPONENTS
                                .iter()
                                .find(|(n, _)| *n == name)
                                .map(|(n, _)| *n)
                                .unwrap(),
                            floats: values.len(),
                            expected,
                        });
                    }
                    for (pt, triple) in values.chunks_exact(3).enumerate() {
                        let flat = (f * people as usize + p) * total_points + offset + pt;
                        data[flat * 2] = triple[0];
                        data[flat * 2 + 1] = triple[1];
                        confidence[flat] = triple[2];
                    }
                }
                offset += expected;
            }
        }
    }

    let header = PoseHeader {
        version: crate::container::FORMAT_VERSION,
        width: doc.width.unwrap_or(0),
        height: doc.height.unwrap_or(0),
        depth: doc.depth.unwrap_or(0),
        components: active.iter().map(|&(name, points)| component_spec(name, points)).collect(),
    };
    let frames = if people == 0 || total_points == 0 { 0 } else { frames };
    let axes = if active.is_empty() { 0 } else { 2 };
    let body = PoseBody::new(doc.fps.unwrap_or(25), people, frames, total_points, axes, data, confidence)
        .map_err(|e| OpenPoseError::BadSchema(e.to_string()))?;
    Pose::new(header, body).map_err(|e| OpenPoseError::BadSchema(e.to_string()))
}

/// Serializes a pose into the OpenPose-style JSON schema. Only poses whose
/// components are drawn from the four known arrays (with matching point
/// counts and 2 axes) are expressible.
pub fn to_openpose_json(pose: &Pose) -> Result<String, OpenPoseError> {
    if pose.body.axes() != 2 {
        return Err(OpenPoseError::Inexpressible(format!(
            "{} axes; the schema stores (x, y, c) triples",
            pose.body.axes()
        )));
    }
    for c in &pose.header.components {
        match COMPONENTS.iter().find(|(name, _)| *name == c.name) {
            Some(&(_, points)) if points == c.point_count() => {}
            Some(&(name, points)) => {
                return Err(OpenPoseError::Inexpressible(format!(
                    "component {name:?} has {} points, schema expects {points}",
                    c.point_count()
                )))
            }
            None => {
                return Err(OpenPoseError::Inexpressible(format!(
                    "component {:?} has no array in the schema",
                    c.name
                )))
            }
        }
    }

    let mut frames = BTreeMap::new();
    for f in 0..pose.frames() {
        let mut people = Vec::with_capacity(pose.body.people() as usize);
        for p in 0..pose.body.people() as usize {
            let mut person = JsonPerson::default();
            let mut offset = 0usize;
            for c in &pose.header.components {
                let mut values = Vec::with_capacity(c.point_count() * 3);
                for pt in offset..offset + c.point_count() {
                    let coords = pose.body.coords(f, p, pt);
                    values.push(coords[0]);
                    values.push(coords[1]);
                    values.push(pose.body.conf(f, p, pt));
                }
                match c.name.as_str() {
                    "pose_keypoints_2d" => person.pose_keypoints_2d = Some(values),
                    "face_keypoints_2d" => person.face_keypoints_2d = Some(values),
                    "hand_left_keypoints_2d" => person.hand_left_keypoints_2d = Some(values),
                    "hand_right_keypoints_2d" => person.hand_right_keypoints_2d = Some(values),
                    _ => unreachable!("checked above"),
                }
                offset += c.point_count();
            }
            people.push(person);
        }
        frames.insert(f.to_string(), JsonFrame { people });
    }

    let doc = JsonDocument {
        fps: Some(pose.body.fps),
        width: Some(pose.header.width),
        height: Some(pose.header.height),
        depth: Some(pose.header.depth),
        people: Some(pose.body.people()),
        frames,
    };
    serde_json::to_string(&doc).map_err(|e| OpenPoseError::BadSchema(e.to_string()))
}

/// The full 137-point component layout (body + face + both hands).
pub fn full_component_layout() -> Vec<ComponentSpec> {
    COMPONENTS.iter().map(|&(name, points)| component_spec(name, points)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(n: usize, base: f32) -> String {
        let values: Vec<String> = (0..n)
            .flat_map(|i| {
                vec![
                    format!("{}", base + i as f32),
                    format!("{}", base + i as f32 + 0.5),
                    "0.9".to_string(),
                ]
            })
            .collect();
        values.join(",")
    }

    #[test]
    fn single_person_body_only_frame() {
        let json = format!(
            r#"{{"frames": {{"0": {{"people": [{{"pose_keypoints_2d": [{}]}}]}}}}}}"#,
            triples(25, 1.0)
        );
        let pose = ingest_openpose(&json).unwrap();
        assert_eq!(pose.frames(), 1);
        assert_eq!(pose.body.people(), 1);
        assert_eq!(pose.body.points(), 25);
        assert_eq!(pose.body.coords(0, 0, 3), &[4.0, 4.5]);
        assert_eq!(pose.fps(), 25);
    }

    #[test]
    fn zero_confidence_keypoints_are_missing() {
        let json = r#"{"frames": {"0": {"people": [
            {"hand_left_keypoints_2d": [5, 6, 0,  1, 2, 0.5,  0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0,
                0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0, 0,0,0,
                0,0,0, 0,0,0, 0,0,0]}
        ]}}}"#;
        let pose = ingest_openpose(json).unwrap();
        assert!(!pose.body.is_present(0, 0, 0));
        assert!(pose.body.is_present(0, 0, 1));
        // Coordinates come through even for missing points.
        assert_eq!(pose.body.coords(0, 0, 0), &[5.0, 6.0]);
    }

    #[test]
    fn ragged_arrays_are_rejected() {
        let json = r#"{"frames": {"0": {"people": [{"pose_keypoints_2d": [1, 2, 0.5, 7]}]}}}"#;
        assert!(matches!(
            ingest_openpose(json),
            Err(OpenPoseError::RaggedKeypoints { floats: 4, .. })
        ));
    }

    #[test]
    fn frames_are_ordered_numerically() {
        let json = format!(
            r#"{{"frames": {{
                "10": {{"people": [{{"pose_keypoints_2d": [{}]}}]}},
                "2": {{"people": [{{"pose_keypoints_2d": [{}]}}]}}
            }}}}"#,
            triples(25, 100.0),
            triples(25, 1.0)
        );
        let pose = ingest_openpose(&json).unwrap();
        assert_eq!(pose.frames(), 2);
        // Key "2" must come first despite "10" sorting earlier as a string.
        assert_eq!(pose.body.coords(0, 0, 0), &[1.0, 1.5]);
        assert_eq!(pose.body.coords(1, 0, 0), &[100.0, 100.5]);
    }

    #[test]
    fn full_payload_has_137_points() {
        let pose = crate::container::generate_synthetic(2, 1, &full_component_layout(), 5);
        assert_eq!(pose.body.points(), 137);
        let json = to_openpose_json(&pose).unwrap();
        let back = ingest_openpose(&json).unwrap();
        assert_eq!(back, pose);
    }

    #[test]
    fn people_are_padded_and_truncated_to_declared_count() {
        let json = format!(
            r#"{{"people": 2, "frames": {{"0": {{"people": [{{"pose_keypoints_2d": [{}]}}]}}}}}}"#,
            triples(25, 1.0)
        );
        let pose = ingest_openpose(&json).unwrap();
        assert_eq!(pose.body.people(), 2);
        assert!(pose.body.is_present(0, 0, 0));
        assert!(!pose.body.is_present(0, 1, 0));

        let json = format!(
            r#"{{"people": 1, "frames": {{"0": {{"people": [
                {{"pose_keypoints_2d": [{}]}}, {{"pose_keypoints_2d": [{}]}}
            ]}}}}}}"#,
            triples(25, 1.0),
            triples(25, 50.0)
        );
        let pose = ingest_openpose(&json).unwrap();
        assert_eq!(pose.body.people(), 1);
        assert_eq!(pose.body.coords(0, 0, 0), &[1.0, 1.5]);
    }

    #[test]
    fn non_numeric_frame_keys_are_a_schema_error() {
        let json = r#"{"frames": {"first": {"people": []}}}"#;
        assert!(matches!(ingest_openpose(json), Err(OpenPoseError::BadSchema(_))));
    }

    #[test]
    fn inexpressible_poses_are_rejected() {
        let pose = crate::container::generate_synthetic(
            1,
            1,
            &[ComponentSpec::new("CUSTOM", "XYC", vec!["a".into()])],
            5,
        );
        assert!(matches!(to_openpose_json(&pose), Err(OpenPoseError::Inexpressible(_))));
    }
}
