//! The `.pose` v0.1 binary container and its in-memory representation.
//!
//! A pose file is a header (canvas dimensions plus an ordered list of named
//! keypoint components) followed by a body (fps, people count, and per frame
//! a block of `people x points x axes` f32 coordinates followed by a block of
//! `people x points` f32 confidences). A confidence of exactly 0 marks a
//! missing point: its coordinates carry no meaning but are preserved
//! byte-for-byte. The frame count is never trusted from the file; it is
//! derived from the byte length and the fixed frame stride.

mod codec;
mod synthetic;

pub use codec::{read_pose, read_pose_body, write_pose};
pub use synthetic::generate_synthetic;

use std::fmt;

use thiserror::Error;

/// File format version this toolkit reads and writes.
pub const FORMAT_VERSION: f32 = 0.1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("file truncated: {0}")]
    TruncatedFile(String),
    #[error("unsupported format version {0}")]
    BadVersion(f32),
    #[error("component {component:?} limb {limb} references point {index} but the component has {points} points")]
    BadIndex {
        component: String,
        limb: usize,
        index: u16,
        points: usize,
    },
    #[error("undecodable UTF-8 in string field")]
    BadUtf8,
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("duplicate component {0:?}")]
    DuplicateComponent(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

/// One named group of keypoints (body, face, a hand) with its limb topology.
///
/// `format` describes the per-point channel layout, e.g. `"XYC"` or `"XYZC"`;
/// the trailing channel is always the confidence, so the coordinate axis
/// count is `format.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub name: String,
    pub format: String,
    pub point_names: Vec<String>,
    /// Pairs of point indices, local to this component.
    pub limbs: Vec<(u16, u16)>,
    pub colors: Vec<(u16, u16, u16)>,
}

impl ComponentSpec {
    pub fn new(name: impl Into<String>, format: impl Into<String>, point_names: Vec<String>) -> Self {
        Self {
            name: name.into(),
            format: format.into(),
            point_names,
            limbs: Vec::new(),
            colors: Vec::new(),
        }
    }

    pub fn point_count(&self) -> usize {
        self.point_names.len()
    }

    /// Coordinate axis count encoded by the format string.
    pub fn axis_count(&self) -> usize {
        self.format.chars().count().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseHeader {
    pub version: f32,
    pub width: u16,
    pub height: u16,
    pub depth: u16,
    pub components: Vec<ComponentSpec>,
}

impl PoseHeader {
    pub fn new(components: Vec<ComponentSpec>) -> Self {
        Self {
            version: FORMAT_VERSION,
            width: 0,
            height: 0,
            depth: 0,
            components,
        }
    }

    pub fn total_points(&self) -> usize {
        self.components.iter().map(|c| c.point_count()).sum()
    }

    /// Body tensor axis count: the maximum over components. Components with
    /// fewer axes are zero-filled on the trailing axes.
    pub fn axis_count(&self) -> usize {
        self.components.iter().map(|c| c.axis_count()).max().unwrap_or(0)
    }

    pub fn component(&self, name: &str) -> Option<&ComponentSpec> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Flat point offset of a component in the concatenated point dimension.
    pub fn component_offset(&self, name: &str) -> Option<usize> {
        let mut offset = 0;
        for c in &self.components {
            if c.name == name {
                return Some(offset);
            }
            offset += c.point_count();
        }
        None
    }

    /// Finds a point by name, searching components in header order.
    /// Returns the component index and the flat point index.
    pub fn find_point(&self, point_name: &str) -> Option<(usize, usize)> {
        let mut offset = 0;
        for (ci, c) in self.components.iter().enumerate() {
            if let Some(pi) = c.point_names.iter().position(|n| n == point_name) {
                return Some((ci, offset + pi));
            }
            offset += c.point_count();
        }
        None
    }
}

/// The dense payload: coordinates and confidences for every frame, person and
/// point. Shapes are fixed at construction so the flat-index accessors cannot
/// go out of bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseBody {
    pub fps: u16,
    people: u16,
    frames: usize,
    points: usize,
    axes: usize,
    data: Vec<f32>,
    confidence: Vec<f32>,
}

impl PoseBody {
    pub fn new(
        fps: u16,
        people: u16,
        frames: usize,
        points: usize,
        axes: usize,
        data: Vec<f32>,
        confidence: Vec<f32>,
    ) -> Result<Self, FormatError> {
        let want_data = frames * people as usize * points * axes;
        let want_conf = frames * people as usize * points;
        if data.len() != want_data {
            return Err(FormatError::InvariantViolation(format!(
                "data length {} does not match {frames}x{people}x{points}x{axes}",
                data.len()
            )));
        }
        if confidence.len() != want_conf {
            return Err(FormatError::InvariantViolation(format!(
                "confidence length {} does not match {frames}x{people}x{points}",
                confidence.len()
            )));
        }
        if frames > 0 && (people == 0 || points == 0) {
            // With an empty per-frame payload the frame count cannot be
            // recovered from the file size, so such bodies are not writable.
            return Err(FormatError::InvariantViolation(
                "a body with frames > 0 must have people > 0 and points > 0".into(),
            ));
        }
        Ok(Self { fps, people, frames, points, axes, data, confidence })
    }

    /// All-zero body (every point missing) of the given shape.
    pub fn zeroed(fps: u16, people: u16, frames: usize, points: usize, axes: usize) -> Result<Self, FormatError> {
        let data = vec![0.0; frames * people as usize * points * axes];
        let confidence = vec![0.0; frames * people as usize * points];
        Self::new(fps, people, frames, points, axes, data, confidence)
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn people(&self) -> u16 {
        self.people
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn confidences(&self) -> &[f32] {
        &self.confidence
    }

    pub fn confidences_mut(&mut self) -> &mut [f32] {
        &mut self.confidence
    }

    #[inline]
    fn coord_base(&self, frame: usize, person: usize, point: usize) -> usize {
        ((frame * self.people as usize + person) * self.points + point) * self.axes
    }

    #[inline]
    fn conf_index(&self, frame: usize, person: usize, point: usize) -> usize {
        (frame * self.people as usize + person) * self.points + point
    }

    /// Coordinate slice (`axes` values) of one point.
    #[inline]
    pub fn coords(&self, frame: usize, person: usize, point: usize) -> &[f32] {
        let base = self.coord_base(frame, person, point);
        &self.data[base..base + self.axes]
    }

    #[inline]
    pub fn coords_mut(&mut self, frame: usize, person: usize, point: usize) -> &mut [f32] {
        let base = self.coord_base(frame, person, point);
        let axes = self.axes;
        &mut self.data[base..base + axes]
    }

    #[inline]
    pub fn conf(&self, frame: usize, person: usize, point: usize) -> f32 {
        self.confidence[self.conf_index(frame, person, point)]
    }

    #[inline]
    pub fn set_conf(&mut self, frame: usize, person: usize, point: usize, value: f32) {
        let i = self.conf_index(frame, person, point);
        self.confidence[i] = value;
    }

    /// A point is present when its confidence is strictly positive.
    #[inline]
    pub fn is_present(&self, frame: usize, person: usize, point: usize) -> bool {
        self.conf(frame, person, point) > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub header: PoseHeader,
    pub body: PoseBody,
}

impl Pose {
    /// Couples a header and body, checking that their shapes agree.
    pub fn new(header: PoseHeader, body: PoseBody) -> Result<Self, FormatError> {
        if header.total_points() != body.points {
            return Err(FormatError::InvariantViolation(format!(
                "header declares {} points but body has {}",
                header.total_points(),
                body.points
            )));
        }
        if header.axis_count() != body.axes {
            return Err(FormatError::InvariantViolation(format!(
                "header declares {} axes but body has {}",
                header.axis_count(),
                body.axes
            )));
        }
        Ok(Self { header, body })
    }

    pub fn frames(&self) -> usize {
        self.body.frames()
    }

    pub fn fps(&self) -> u16 {
        self.body.fps
    }

    /// Returns a pose containing only the named components, in request order.
    ///
    /// Data and confidence tensors are sliced per component block; the axis
    /// count shrinks to the maximum over the selected components. Limb
    /// indices are component-local and therefore carry over unchanged.
    pub fn select_components(&self, names: &[&str]) -> Result<Pose, FormatError> {
        let mut picked: Vec<usize> = Vec::with_capacity(names.len());
        for name in names {
            let idx = self
                .header
                .components
                .iter()
                .position(|c| c.name == *name)
                .ok_or_else(|| FormatError::UnknownComponent(name.to_string()))?;
            if picked.contains(&idx) {
                return Err(FormatError::DuplicateComponent(name.to_string()));
            }
            picked.push(idx);
        }

        let components: Vec<ComponentSpec> =
            picked.iter().map(|&i| self.header.components[i].clone()).collect();
        let new_axes = components.iter().map(|c| c.axis_count()).max().unwrap_or(0);
        let new_points: usize = components.iter().map(|c| c.point_count()).sum();

        // Flat point ranges of each picked component in the source tensor.
        let mut offsets = Vec::with_capacity(self.header.components.len());
        let mut off = 0;
        for c in &self.header.components {
            offsets.push(off);
            off += c.point_count();
        }

        let frames = self.body.frames();
        let people = self.body.people() as usize;
        let mut data = Vec::with_capacity(frames * people * new_points * new_axes);
        let mut confidence = Vec::with_capacity(frames * people * new_points);
        for f in 0..frames {
            for p in 0..people {
                for &ci in &picked {
                    let start = offsets[ci];
                    for pt in start..start + self.header.components[ci].point_count() {
                        data.extend_from_slice(&self.body.coords(f, p, pt)[..new_axes]);
                        confidence.push(self.body.conf(f, p, pt));
                    }
                }
            }
        }

        let header = PoseHeader {
            version: self.header.version,
            width: self.header.width,
            height: self.header.height,
            depth: self.header.depth,
            components,
        };
        let body = PoseBody::new(self.body.fps, self.body.people(), frames, new_points, new_axes, data, confidence)?;
        Pose::new(header, body)
    }

    /// Checks every invariant and reports all violations with locations.
    /// Total: never fails, an empty report means the pose is valid.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        if (self.header.version - FORMAT_VERSION).abs() > 1e-6 {
            violations.push(Violation::BadVersion { version: self.header.version });
        }
        for (i, c) in self.header.components.iter().enumerate() {
            if self.header.components[..i].iter().any(|o| o.name == c.name) {
                violations.push(Violation::DuplicateComponentName { name: c.name.clone() });
            }
            for (li, &(a, b)) in c.limbs.iter().enumerate() {
                for index in [a, b] {
                    if index as usize >= c.point_count() {
                        violations.push(Violation::BadLimbIndex {
                            component: c.name.clone(),
                            limb: li,
                            index,
                            points: c.point_count(),
                        });
                    }
                }
            }
        }

        if self.header.total_points() != self.body.points() {
            violations.push(Violation::ShapeMismatch {
                detail: format!(
                    "header declares {} points, body has {}",
                    self.header.total_points(),
                    self.body.points()
                ),
            });
        }
        if self.header.axis_count() != self.body.axes() {
            violations.push(Violation::ShapeMismatch {
                detail: format!(
                    "header declares {} axes, body has {}",
                    self.header.axis_count(),
                    self.body.axes()
                ),
            });
        }
        if self.body.frames() > 0 && (self.body.people() == 0 || self.body.points() == 0) {
            violations.push(Violation::ShapeMismatch {
                detail: "frames > 0 with an empty per-frame payload".into(),
            });
        }

        for f in 0..self.body.frames() {
            for p in 0..self.body.people() as usize {
                for pt in 0..self.body.points() {
                    let conf = self.body.conf(f, p, pt);
                    if conf < 0.0 {
                        violations.push(Violation::NegativeConfidence { frame: f, person: p, point: pt });
                    }
                    for (axis, v) in self.body.coords(f, p, pt).iter().enumerate() {
                        if !v.is_finite() {
                            violations.push(Violation::NonFiniteCoordinate {
                                frame: f,
                                person: p,
                                point: pt,
                                axis,
                            });
                        }
                    }
                }
            }
        }

        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BadVersion { version: f32 },
    DuplicateComponentName { name: String },
    BadLimbIndex { component: String, limb: usize, index: u16, points: usize },
    ShapeMismatch { detail: String },
    NegativeConfidence { frame: usize, person: usize, point: usize },
    NonFiniteCoordinate { frame: usize, person: usize, point: usize, axis: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadVersion { version } => write!(f, "bad version {version}"),
            Violation::DuplicateComponentName { name } => write!(f, "duplicate component {name:?}"),
            Violation::BadLimbIndex { component, limb, index, points } => write!(
                f,
                "component {component:?} limb {limb} references point {index} of {points}"
            ),
            Violation::ShapeMismatch { detail } => write!(f, "shape mismatch: {detail}"),
            Violation::NegativeConfidence { frame, person, point } => {
                write!(f, "negative confidence at frame {frame} person {person} point {point}")
            }
            Violation::NonFiniteCoordinate { frame, person, point, axis } => write!(
                f,
                "non-finite coordinate at frame {frame} person {person} point {point} axis {axis}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
