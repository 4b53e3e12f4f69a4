//! Read-speed and file-size benchmark of the `.pose` container against
//! OpenPose-style JSON.
//!
//! Three timings per pair, each with 2 warmup runs and `iterations` timed
//! runs on a monotonic clock, reported as mean and sample standard
//! deviation: parsing the JSON document (no tensor conversion), the full
//! `.pose` read, and the body-only `.pose` read that skims the header.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::container::{generate_synthetic, read_pose, read_pose_body, write_pose};
use crate::openpose::{full_component_layout, ingest_openpose, to_openpose_json};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("need at least {MIN_ITERATIONS} timed iterations, got {0}")]
    TooFewIterations(usize),
    #[error("benchmark pair files decode to different poses")]
    ContentMismatch,
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] crate::container::FormatError),
    #[error(transparent)]
    Json(#[from] crate::openpose::OpenPoseError),
}

pub const MIN_ITERATIONS: usize = 5;
const WARMUP_RUNS: usize = 2;

/// Mean and sample standard deviation of a timed run, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub mean_ns: f64,
    pub std_ns: f64,
}

impl Timing {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
        Self { mean_ns: mean, std_ns: var.sqrt() }
    }

    /// Human-readable `mean +- std` with an auto-selected unit.
    pub fn display(&self) -> String {
        let (scale, unit) = match self.mean_ns {
            m if m >= 1e9 => (1e9, "s"),
            m if m >= 1e6 => (1e6, "ms"),
            m if m >= 1e3 => (1e3, "us"),
            _ => (1.0, "ns"),
        };
        format!("{:.3} {unit} +- {:.3} {unit}", self.mean_ns / scale, self.std_ns / scale)
    }
}

/// One benchmarked pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCase {
    pub frames: usize,
    pub json_bytes: u64,
    pub pose_bytes: u64,
    pub json_parse: Timing,
    pub pose_full_read: Timing,
    pub pose_body_read: Timing,
    pub iterations: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub cases: Vec<BenchCase>,
}

impl BenchReport {
    /// Aligned-column text rendering.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<[String; 6]> = vec![[
            "frames".into(),
            "json size".into(),
            "pose size".into(),
            "json parse".into(),
            "pose read".into(),
            "pose body read".into(),
        ]];
        for c in &self.cases {
            rows.push([
                c.frames.to_string(),
                format_size(c.json_bytes),
                format_size(c.pose_bytes),
                c.json_parse.display(),
                c.pose_full_read.display(),
                c.pose_body_read.display(),
            ]);
        }
        let widths: Vec<usize> = (0..6)
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:<width$}", cell, width = widths[i]));
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable CSV rendering (times in nanoseconds).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "frames,json_bytes,pose_bytes,json_parse_mean_ns,json_parse_std_ns,\
             pose_full_read_mean_ns,pose_full_read_std_ns,pose_body_read_mean_ns,pose_body_read_std_ns,iterations\n",
        );
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{:.0},{:.0},{:.0},{:.0},{:.0},{:.0},{}\n",
                c.frames,
                c.json_bytes,
                c.pose_bytes,
                c.json_parse.mean_ns,
                c.json_parse.std_ns,
                c.pose_full_read.mean_ns,
                c.pose_full_read.std_ns,
                c.pose_body_read.mean_ns,
                c.pose_body_read.std_ns,
                c.iterations,
            ));
        }
        out
    }
}

fn format_size(bytes: u64) -> String {
    match bytes {
        b if b >= 10 * 1024 * 1024 => format!("{:.0} MB", b as f64 / (1024.0 * 1024.0)),
        b if b >= 1024 * 1024 => format!("{:.1} MB", b as f64 / (1024.0 * 1024.0)),
        b if b >= 1024 => format!("{:.1} KB", b as f64 / 1024.0),
        b => format!("{b} B"),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, BenchError> {
    fs::read(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}

fn time_runs(iterations: usize, mut run: impl FnMut()) -> Timing {
    for _ in 0..WARMUP_RUNS {
        run();
    }
    let samples: Vec<f64> = (0..iterations)
        .map(|_| {
            let start = Instant::now();
            run();
            start.elapsed().as_nanos() as f64
        })
        .collect();
    Timing::from_samples(&samples)
}

/// Writes a synthetic 137-point single-person sequence as both a `.pose`
/// file and its OpenPose-style JSON equivalent, deterministically per seed.
/// Returns the two paths (json, pose).
pub fn make_benchmark_pair(
    frames: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf), BenchError> {
    let mut pose = generate_synthetic(frames, 1, &full_component_layout(), seed);
    // Keep every synthetic point present: confidence 0 has missing-point
    // semantics that the size/speed comparison does not need.
    for c in pose.body.confidences_mut() {
        if *c == 0.0 {
            *c = 0.5;
        }
    }

    fs::create_dir_all(out_dir)
        .map_err(|source| BenchError::Io { path: out_dir.to_path_buf(), source })?;
    let json_path = out_dir.join(format!("bench_{frames}f_{seed}.json"));
    let pose_path = out_dir.join(format!("bench_{frames}f_{seed}.pose"));

    let json = to_openpose_json(&pose)?;
    fs::write(&json_path, json)
        .map_err(|source| BenchError::Io { path: json_path.clone(), source })?;
    let bytes = write_pose(&pose)?;
    fs::write(&pose_path, bytes)
        .map_err(|source| BenchError::Io { path: pose_path.clone(), source })?;
    Ok((json_path, pose_path))
}

/// Benchmarks one json/pose pair. The two files must decode to the same pose
/// value; this is checked before any timing is reported.
pub fn bench_read(json_path: &Path, pose_path: &Path, iterations: usize) -> Result<BenchCase, BenchError> {
    if iterations < MIN_ITERATIONS {
        return Err(BenchError::TooFewIterations(iterations));
    }

    let json_bytes_content = read_file(json_path)?;
    let pose_bytes_content = read_file(pose_path)?;
    let from_json = ingest_openpose(std::str::from_utf8(&json_bytes_content).map_err(|_| {
        BenchError::Json(crate::openpose::OpenPoseError::BadSchema("not UTF-8".into()))
    })?)?;
    let from_pose = read_pose(&pose_bytes_content)?;
    if from_json != from_pose {
        return Err(BenchError::ContentMismatch);
    }
    drop(json_bytes_content);
    drop(pose_bytes_content);

    let json_parse = time_runs(iterations, || {
        let bytes = fs::read(json_path).expect("benchmark file vanished");
        let value: serde_json::Value = serde_json::from_slice(&bytes).expect("checked above");
        std::hint::black_box(&value);
    });
    let pose_full_read = time_runs(iterations, || {
        let bytes = fs::read(pose_path).expect("benchmark file vanished");
        let pose = read_pose(&bytes).expect("checked above");
        std::hint::black_box(&pose);
    });
    let pose_body_read = time_runs(iterations, || {
        let bytes = fs::read(pose_path).expect("benchmark file vanished");
        let body = read_pose_body(&bytes).expect("checked above");
        std::hint::black_box(&body);
    });

    Ok(BenchCase {
        frames: from_pose.frames(),
        json_bytes: fs::metadata(json_path)
            .map_err(|source| BenchError::Io { path: json_path.to_path_buf(), source })?
            .len(),
        pose_bytes: fs::metadata(pose_path)
            .map_err(|source| BenchError::Io { path: pose_path.to_path_buf(), source })?
            .len(),
        json_parse,
        pose_full_read,
        pose_body_read,
        iterations,
    })
}
