//! Rasterizes pose frames to binary PPM (P6) images for inspection.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::container::Pose;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("frame {frame} out of range (pose has {frames} frames)")]
    FrameOutOfRange { frame: usize, frames: usize },
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Canvas size; `None` falls back to the header dimensions, or 512x512
    /// when the header has none.
    pub canvas: Option<(u16, u16)>,
    pub point_radius: u16,
    pub background: (u8, u8, u8),
    /// Points with confidence at or below this value are not drawn.
    pub confidence_floor: f32,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            canvas: None,
            point_radius: 2,
            background: (255, 255, 255),
            confidence_floor: 0.0,
        }
    }
}

impl RenderConfig {
    fn canvas_for(&self, pose: &Pose) -> (usize, usize) {
        if let Some((w, h)) = self.canvas {
            return (w.max(1) as usize, h.max(1) as usize);
        }
        if pose.header.width > 0 && pose.header.height > 0 {
            (pose.header.width as usize, pose.header.height as usize)
        } else {
            (512, 512)
        }
    }
}

/// An 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    fn filled(width: usize, height: usize, color: (u8, u8, u8)) -> Self {
        let mut pixels = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            pixels.extend_from_slice(&[color.0, color.1, color.2]);
        }
        Self { width, height, pixels }
    }

    pub fn pixel(&self, x: usize, y: usize) -> (u8, u8, u8) {
        let i = (y * self.width + x) * 3;
        (self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])
    }

    fn put(&mut self, x: i64, y: i64, color: (u8, u8, u8)) {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return;
        }
        let i = (y as usize * self.width + x as usize) * 3;
        self.pixels[i] = color.0;
        self.pixels[i + 1] = color.1;
        self.pixels[i + 2] = color.2;
    }

    fn disc(&mut self, cx: i64, cy: i64, radius: i64, color: (u8, u8, u8)) {
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                if dx * dx + dy * dy <= radius * radius {
                    self.put(cx + dx, cy + dy, color);
                }
            }
        }
    }

    fn line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, color: (u8, u8, u8)) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let (mut x, mut y) = (x0, y0);
        let mut err = dx + dy;
        loop {
            self.put(x, y, color);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    /// Binary PPM (P6) encoding; byte-exact for identical pixels.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

fn clamp_color(c: (u16, u16, u16)) -> (u8, u8, u8) {
    (c.0.min(255) as u8, c.1.min(255) as u8, c.2.min(255) as u8)
}

/// Uniform fit: maps the bounding box of all present points (over the whole
/// sequence) into the canvas with preserved aspect ratio and a small margin.
struct Fit {
    scale: f64,
    offset: [f64; 2],
}

impl Fit {
    fn compute(pose: &Pose, canvas: (usize, usize), margin: f64, floor: f32) -> Fit {
        let body = &pose.body;
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for f in 0..body.frames() {
            for p in 0..body.people() as usize {
                for pt in 0..body.points() {
                    if body.conf(f, p, pt) <= floor {
                        continue;
                    }
                    let c = body.coords(f, p, pt);
                    for a in 0..2.min(body.axes()) {
                        min[a] = min[a].min(c[a] as f64);
                        max[a] = max[a].max(c[a] as f64);
                    }
                }
            }
        }
        let usable = [canvas.0 as f64 - 2.0 * margin, canvas.1 as f64 - 2.0 * margin];
        if !min[0].is_finite() || !min[1].is_finite() {
            return Fit { scale: 1.0, offset: [margin, margin] };
        }
        let extent = [(max[0] - min[0]).max(1e-9), (max[1] - min[1]).max(1e-9)];
        let scale = (usable[0] / extent[0]).min(usable[1] / extent[1]);
        // Center the drawing in the canvas.
        let offset = [
            margin + (usable[0] - extent[0] * scale) / 2.0 - min[0] * scale,
            margin + (usable[1] - extent[1] * scale) / 2.0 - min[1] * scale,
        ];
        Fit { scale, offset }
    }

    fn map(&self, coords: &[f32]) -> (i64, i64) {
        let x = coords[0] as f64 * self.scale + self.offset[0];
        let y = coords[1] as f64 * self.scale + self.offset[1];
        (x.round() as i64, y.round() as i64)
    }
}

/// Draws one frame: limbs as lines in the component color (colors cycled per
/// limb), then present points as filled discs. Deterministic for identical
/// inputs.
pub fn render_frame(pose: &Pose, frame: usize, config: &RenderConfig) -> Result<Image, RenderError> {
    if frame >= pose.frames() {
        return Err(RenderError::FrameOutOfRange { frame, frames: pose.frames() });
    }
    let canvas = config.canvas_for(pose);
    let margin = config.point_radius as f64 + 2.0;
    let fit = Fit::compute(pose, canvas, margin, config.confidence_floor);
    let mut image = Image::filled(canvas.0, canvas.1, config.background);
    let body = &pose.body;

    let drawable = |f: usize, p: usize, pt: usize| body.conf(f, p, pt) > config.confidence_floor;

    for p in 0..body.people() as usize {
        let mut offset = 0usize;
        for component in &pose.header.components {
            let default_color = (0u8, 0u8, 0u8);
            for (li, &(a, b)) in component.limbs.iter().enumerate() {
                let (pa, pb) = (offset + a as usize, offset + b as usize);
                if !drawable(frame, p, pa) || !drawable(frame, p, pb) {
                    continue;
                }
                let color = component
                    .colors
                    .get(li % component.colors.len().max(1))
                    .map(|&c| clamp_color(c))
                    .unwrap_or(default_color);
                let (x0, y0) = fit.map(body.coords(frame, p, pa));
                let (x1, y1) = fit.map(body.coords(frame, p, pb));
                image.line(x0, y0, x1, y1, color);
            }
            let point_color = component
                .colors
                .first()
                .map(|&c| clamp_color(c))
                .unwrap_or(default_color);
            for pt in offset..offset + component.point_count() {
                if !drawable(frame, p, pt) {
                    continue;
                }
                let (x, y) = fit.map(body.coords(frame, p, pt));
                image.disc(x, y, config.point_radius as i64, point_color);
            }
            offset += component.point_count();
        }
    }
    Ok(image)
}

/// Renders every frame to `out_dir/frame_%05d.ppm` and returns the paths.
pub fn render_sequence(
    pose: &Pose,
    out_dir: &Path,
    config: &RenderConfig,
) -> Result<Vec<PathBuf>, RenderError> {
    fs::create_dir_all(out_dir)
        .map_err(|source| RenderError::Io { path: out_dir.to_path_buf(), source })?;
    let mut paths = Vec::with_capacity(pose.frames());
    for f in 0..pose.frames() {
        let image = render_frame(pose, f, config)?;
        let path = out_dir.join(format!("frame_{f:05}.ppm"));
        let mut file = fs::File::create(&path)
            .map_err(|source| RenderError::Io { path: path.clone(), source })?;
        file.write_all(&image.to_ppm())
            .map_err(|source| RenderError::Io { path: path.clone(), source })?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{ComponentSpec, PoseBody, PoseHeader};

    fn two_point_pose() -> Pose {
        let mut spec = ComponentSpec::new("BODY", "XYC", vec!["a".into(), "b".into()]);
        spec.limbs = vec![(0, 1)];
        spec.colors = vec![(255, 0, 0)];
        let mut header = PoseHeader::new(vec![spec]);
        header.width = 64;
        header.height = 64;
        let mut body = PoseBody::zeroed(25, 1, 1, 2, 2).unwrap();
        body.coords_mut(0, 0, 0).copy_from_slice(&[0.0, 0.0]);
        body.coords_mut(0, 0, 1).copy_from_slice(&[10.0, 10.0]);
        body.set_conf(0, 0, 0, 1.0);
        body.set_conf(0, 0, 1, 1.0);
        Pose::new(header, body).unwrap()
    }

    #[test]
    fn empty_frame_renders_background_only() {
        let mut pose = two_point_pose();
        pose.body.set_conf(0, 0, 0, 0.0);
        pose.body.set_conf(0, 0, 1, 0.0);
        let image = render_frame(&pose, 0, &RenderConfig::default()).unwrap();
        assert!(image.pixels.iter().all(|&b| b == 255));
    }

    #[test]
    fn line_and_discs_hit_expected_pixels() {
        let pose = two_point_pose();
        let image = render_frame(&pose, 0, &RenderConfig::default()).unwrap();
        let red = (255, 0, 0);
        // Probe the two endpoints and the segment midpoint. The fit maps the
        // diagonal onto (4,4)..(60,60) in the 64x64 canvas (4 px margin).
        assert_eq!(image.pixel(4, 4), red);
        assert_eq!(image.pixel(60, 60), red);
        assert_eq!(image.pixel(32, 32), red);
        // A corner pixel stays background.
        assert_eq!(image.pixel(63, 0), (255, 255, 255));
    }

    #[test]
    fn rendering_is_deterministic() {
        let pose = two_point_pose();
        let a = render_frame(&pose, 0, &RenderConfig::default()).unwrap();
        let b = render_frame(&pose, 0, &RenderConfig::default()).unwrap();
        assert_eq!(a.to_ppm(), b.to_ppm());
    }

    #[test]
    fn out_of_range_frame_is_rejected() {
        let pose = two_point_pose();
        assert!(matches!(
            render_frame(&pose, 1, &RenderConfig::default()),
            Err(RenderError::FrameOutOfRange { frame: 1, frames: 1 })
        ));
    }

    #[test]
    fn sequence_writes_zero_padded_files() {
        let pose = two_point_pose();
        let dir = tempfile::tempdir().unwrap();
        let paths = render_sequence(&pose, dir.path(), &RenderConfig::default()).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].file_name().unwrap().to_str().unwrap() == "frame_00000.ppm");
        let bytes = fs::read(&paths[0]).unwrap();
        assert!(bytes.starts_with(b"P6\n64 64\n255\n"));
    }
}
