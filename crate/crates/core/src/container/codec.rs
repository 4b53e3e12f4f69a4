//! Binary reader/writer for `.pose` v0.1.
//!
//! Layout, all integers little-endian, strings as u16 byte length + UTF-8:
//!
//! ```text
//! header  f32 version | u16 width | u16 height | u16 depth | u16 n_components
//!         per component: str name | str format
//!                        | u16 n_points | u16 n_limbs | u16 n_colors
//!                        | n_points * str | n_limbs * (u16,u16) | n_colors * (u16,u16,u16)
//! body    u16 fps | u16 deprecated_frame_count (written as 0, ignored on read)
//!         | u16 n_people
//!         per frame: n_people*n_points*n_axes f32 coords,
//!                    then n_people*n_points f32 confidences
//! ```
//!
//! The frame count is derived from the remaining byte length, which must be
//! an exact multiple of the frame stride.

use super::{ComponentSpec, FormatError, Pose, PoseBody, PoseHeader, FORMAT_VERSION};

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], FormatError> {
        if self.pos + n > self.bytes.len() {
            return Err(FormatError::TruncatedFile(format!(
                "need {n} bytes for {what} at offset {}, have {}",
                self.pos,
                self.bytes.len() - self.pos
            )));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u16(&mut self, what: &str) -> Result<u16, FormatError> {
        let b = self.take(2, what)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn f32(&mut self, what: &str) -> Result<f32, FormatError> {
        let b = self.take(4, what)?;
        Ok(f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn string(&mut self, what: &str) -> Result<String, FormatError> {
        let len = self.u16(what)? as usize;
        let b = self.take(len, what)?;
        String::from_utf8(b.to_vec()).map_err(|_| FormatError::BadUtf8)
    }

    /// Skips a length-prefixed string without validating or allocating.
    fn skip_string(&mut self, what: &str) -> Result<(), FormatError> {
        let len = self.u16(what)? as usize;
        self.take(len, what)?;
        Ok(())
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

fn read_header(r: &mut Reader) -> Result<PoseHeader, FormatError> {
    let version = r.f32("version")?;
    if (version - FORMAT_VERSION).abs() > 1e-6 {
        return Err(FormatError::BadVersion(version));
    }
    let width = r.u16("width")?;
    let height = r.u16("height")?;
    let depth = r.u16("depth")?;
    let n_components = r.u16("component count")?;

    let mut components = Vec::with_capacity(n_components as usize);
    for _ in 0..n_components {
        let name = r.string("component name")?;
        let format = r.string("component format")?;
        let n_points = r.u16("point count")? as usize;
        let n_limbs = r.u16("limb count")? as usize;
        let n_colors = r.u16("color count")? as usize;

        let mut point_names = Vec::with_capacity(n_points);
        for _ in 0..n_points {
            point_names.push(r.string("point name")?);
        }
        let mut limbs = Vec::with_capacity(n_limbs);
        for li in 0..n_limbs {
            let a = r.u16("limb start")?;
            let b = r.u16("limb end")?;
            for index in [a, b] {
                if index as usize >= n_points {
                    return Err(FormatError::BadIndex {
                        component: name.clone(),
                        limb: li,
                        index,
                        points: n_points,
                    });
                }
            }
            limbs.push((a, b));
        }
        let mut colors = Vec::with_capacity(n_colors);
        for _ in 0..n_colors {
            colors.push((r.u16("color r")?, r.u16("color g")?, r.u16("color b")?));
        }

        if components.iter().any(|c: &ComponentSpec| c.name == name) {
            return Err(FormatError::DuplicateComponent(name));
        }
        components.push(ComponentSpec { name, format, point_names, limbs, colors });
    }

    Ok(PoseHeader { version, width, height, depth, components })
}

/// Header scan that only extracts the shape (points, axes), skipping string
/// payloads. Used by the body-only read path.
fn skim_header(r: &mut Reader) -> Result<(usize, usize), FormatError> {
    let version = r.f32("version")?;
    if (version - FORMAT_VERSION).abs() > 1e-6 {
        return Err(FormatError::BadVersion(version));
    }
    r.take(6, "dimensions")?;
    let n_components = r.u16("component count")?;
    let mut points = 0usize;
    let mut axes = 0usize;
    for _ in 0..n_components {
        r.skip_string("component name")?;
        let format_len = r.u16("component format")? as usize;
        r.take(format_len, "component format")?;
        axes = axes.max(format_len.saturating_sub(1));
        let n_points = r.u16("point count")? as usize;
        let n_limbs = r.u16("limb count")? as usize;
        let n_colors = r.u16("color count")? as usize;
        for _ in 0..n_points {
            r.skip_string("point name")?;
        }
        r.take(n_limbs * 4 + n_colors * 6, "limbs and colors")?;
        points += n_points;
    }
    Ok((points, axes))
}

fn read_body(r: &mut Reader, points: usize, axes: usize) -> Result<PoseBody, FormatError> {
    let fps = r.u16("fps")?;
    let _deprecated_frame_count = r.u16("deprecated frame count")?;
    let people = r.u16("people count")?;

    let frame_floats = people as usize * points * (axes + 1);
    let stride = frame_floats * 4;
    let remaining = r.remaining();
    let frames = if stride == 0 {
        if remaining != 0 {
            return Err(FormatError::TruncatedFile(format!(
                "{remaining} trailing bytes after a body with an empty frame payload"
            )));
        }
        0
    } else {
        if remaining % stride != 0 {
            return Err(FormatError::TruncatedFile(format!(
                "body length {remaining} is not a multiple of the frame stride {stride}"
            )));
        }
        remaining / stride
    };

    let coords_per_frame = people as usize * points * axes;
    let mut data = Vec::with_capacity(frames * coords_per_frame);
    let mut confidence = Vec::with_capacity(frames * people as usize * points);
    for _ in 0..frames {
        let block = r.take(coords_per_frame * 4, "frame coordinates")?;
        data.extend(block.chunks_exact(4).map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])));
        let block = r.take(people as usize * points * 4, "frame confidences")?;
        confidence.extend(block.chunks_exact(4).map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])));
    }

    PoseBody::new(fps, people, frames, points, axes, data, confidence)
}

/// Parses a full `.pose` file.
pub fn read_pose(bytes: &[u8]) -> Result<Pose, FormatError> {
    let mut r = Reader::new(bytes);
    let header = read_header(&mut r)?;
    let body = read_body(&mut r, header.total_points(), header.axis_count())?;
    Pose::new(header, body)
}

/// Reads only the body tensors, skimming the header for its shape without
/// decoding names, limbs or colors.
pub fn read_pose_body(bytes: &[u8]) -> Result<PoseBody, FormatError> {
    let mut r = Reader::new(bytes);
    let (points, axes) = skim_header(&mut r)?;
    read_body(&mut r, points, axes)
}

fn push_string(out: &mut Vec<u8>, s: &str) -> Result<(), FormatError> {
    let bytes = s.as_bytes();
    if bytes.len() > u16::MAX as usize {
        return Err(FormatError::InvariantViolation(format!(
            "string field of {} bytes exceeds the u16 length prefix",
            bytes.len()
        )));
    }
    out.extend_from_slice(&(bytes.len() as u16).to_le_bytes());
    out.extend_from_slice(bytes);
    Ok(())
}

fn check_u16(value: usize, what: &str) -> Result<u16, FormatError> {
    u16::try_from(value)
        .map_err(|_| FormatError::InvariantViolation(format!("{what} {value} exceeds u16")))
}

/// Serializes a pose. The caller-supplied value is checked against every
/// header and shape invariant before any byte is emitted.
pub fn write_pose(pose: &Pose) -> Result<Vec<u8>, FormatError> {
    let report = pose.validate();
    if let Some(first) = report.violations.first() {
        return Err(FormatError::InvariantViolation(first.to_string()));
    }

    let header = &pose.header;
    let body = &pose.body;
    let mut out = Vec::with_capacity(64 + body.data().len() * 4 + body.confidences().len() * 4);

    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&header.width.to_le_bytes());
    out.extend_from_slice(&header.height.to_le_bytes());
    out.extend_from_slice(&header.depth.to_le_bytes());
    out.extend_from_slice(&check_u16(header.components.len(), "component count")?.to_le_bytes());
    for c in &header.components {
        push_string(&mut out, &c.name)?;
        push_string(&mut out, &c.format)?;
        out.extend_from_slice(&check_u16(c.point_count(), "point count")?.to_le_bytes());
        out.extend_from_slice(&check_u16(c.limbs.len(), "limb count")?.to_le_bytes());
        out.extend_from_slice(&check_u16(c.colors.len(), "color count")?.to_le_bytes());
        for name in &c.point_names {
            push_string(&mut out, name)?;
        }
        for &(a, b) in &c.limbs {
            out.extend_from_slice(&a.to_le_bytes());
            out.extend_from_slice(&b.to_le_bytes());
        }
        for &(r, g, b) in &c.colors {
            out.extend_from_slice(&r.to_le_bytes());
            out.extend_from_slice(&g.to_le_bytes());
            out.extend_from_slice(&b.to_le_bytes());
        }
    }

    out.extend_from_slice(&body.fps.to_le_bytes());
    // Deprecated frame count: readers derive the count from the file size.
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&body.people().to_le_bytes());

    let people = body.people() as usize;
    let points = body.points();
    let axes = body.axes();
    let coords_per_frame = people * points * axes;
    let confs_per_frame = people * points;
    for f in 0..body.frames() {
        let coord_start = f * coords_per_frame;
        for v in &body.data()[coord_start..coord_start + coords_per_frame] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let conf_start = f * confs_per_frame;
        for v in &body.confidences()[conf_start..conf_start + confs_per_frame] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }

    Ok(out)
}
