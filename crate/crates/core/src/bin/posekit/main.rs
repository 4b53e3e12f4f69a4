//! Command-line surface over the toolkit: one thin subcommand per library
//! operation. Exit codes: 0 success, 1 usage error, 2 data error.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use posekit::bench::{bench_read, make_benchmark_pair, BenchReport};
use posekit::container::{read_pose, write_pose, Pose};
use posekit::fsw;
use posekit::hand::{self, HandPose, Handedness, HandShapeGroup};
use posekit::openpose::{ingest_openpose, to_openpose_json};
use posekit::ops::{
    affine_augment, frame_dropout, gaussian_noise, interpolate_fps, normalize_plane,
    normalize_shoulders, optical_flow, AffineParams,
};
use posekit::render::{render_sequence, RenderConfig};
use posekit::segmentation::{
    decode_probs_with, format_segments, frame_f1, parse_probs_csv, parse_segments, segment_iou,
    segment_percentage, segments_to_tags, tags_to_segments, DecodeMode, SegmentKind, TagScheme,
    TagSequence,
};
use posekit::stitch::{align_wrist, stitch, StitchConfig};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(name = "posekit", version, about = "Pose data toolkit", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the header summary and frame count of a .pose file.
    Info { file: PathBuf },
    /// Convert between OpenPose-style JSON and .pose (direction from file
    /// extensions).
    Convert { input: PathBuf, output: PathBuf },
    /// Keep only the named components, in the given order.
    Components {
        input: PathBuf,
        /// Comma-separated component names.
        #[arg(long, value_delimiter = ',', required = true)]
        select: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Normalize by shoulder span (--shoulders) or rotate onto a plane
    /// (--plane).
    Normalize {
        input: PathBuf,
        /// Left,Right shoulder point names.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        shoulders: Option<Vec<String>>,
        /// Three point names defining the plane.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        plane: Option<Vec<String>>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Affine augmentation, noise and frame dropout.
    Augment(AugmentArgs),
    /// Resample to a new frame rate.
    Fps {
        input: PathBuf,
        /// Target frames per second.
        #[arg(long = "to")]
        new_fps: u16,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Emit per-point optical flow as CSV (frame,person,point,flow).
    Flow {
        input: PathBuf,
        /// Output CSV path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bring a 21-point hand component to the canonical orientation.
    HandNormalize {
        input: PathBuf,
        /// Name of the 21-point hand component.
        #[arg(long)]
        component: String,
        #[arg(long, value_enum, default_value_t = HandednessArg::Right)]
        handedness: HandednessArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Hand-shape consistency metrics over a group of .pose files.
    HandMetrics {
        /// One observation per file (frame 0, person 0).
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        component: String,
        /// Multi-angle consistency error (with 3-D normalization).
        #[arg(long, conflicts_with = "cce")]
        mace: bool,
        /// Crop consistency error (wrist-shift only).
        #[arg(long)]
        cce: bool,
        #[arg(long, value_enum, default_value_t = HandednessArg::Right)]
        handedness: HandednessArg,
    },
    /// Segments (TSV) to per-frame tags.
    SegmentEncode {
        /// Segment TSV file; stdin when omitted.
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Total frame count of the tag sequence.
        #[arg(long)]
        length: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Probabilities (CSV b,i,o on a 0-100 scale) to segments (TSV).
    SegmentDecode {
        /// Probability CSV file; stdin when omitted.
        input: Option<PathBuf>,
        /// Segment-start threshold.
        #[arg(long = "tb", default_value_t = 50.0)]
        threshold_b: f64,
        /// Segment-end threshold.
        #[arg(long = "to", default_value_t = 50.0)]
        threshold_o: f64,
        /// Trigger on the likeliest class instead of fixed thresholds.
        #[arg(long)]
        argmax: bool,
        #[arg(long, value_enum, default_value_t = KindArg::Sign)]
        kind: KindArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tags back to segments (TSV).
    SegmentTags {
        /// Tag line file; stdin when omitted.
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value_t = KindArg::Sign)]
        kind: KindArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare gold and predicted tags (macro F1) or segments (IoU, %).
    SegmentEval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Input kind: tag lines or segment TSVs.
        #[arg(long, value_enum)]
        kind: EvalKind,
    },
    /// Stitch gloss clips into one pose sequence.
    Stitch(StitchArgs),
    /// Formal SignWriting tokenization (stdin to stdout, line oriented).
    Fsw {
        #[command(subcommand)]
        direction: FswDirection,
    },
    /// Generate a synthetic json/pose pair and benchmark read speed.
    Bench {
        /// Frame counts to benchmark.
        #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10000])]
        frames: Vec<usize>,
        #[arg(long, default_value_t = 7)]
        iters: usize,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
        /// Directory for the generated files (temporary when omitted).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rasterize every frame to out-dir/frame_%05d.ppm.
    Render {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        width: Option<u16>,
        #[arg(long)]
        height: Option<u16>,
        #[arg(long, default_value_t = 2)]
        radius: u16,
        /// Background color as R,G,B.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [255u8, 255, 255])]
        background: Vec<u8>,
        #[arg(long, default_value_t = 0.0)]
        confidence_floor: f32,
    },
}

#[derive(Args)]
struct AugmentArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    rotate: f64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0.0)]
    shear_x: f64,
    #[arg(long, default_value_t = 0.0)]
    shear_y: f64,
    #[arg(long, default_value_t = 0.0)]
    translate_x: f64,
    #[arg(long, default_value_t = 0.0)]
    translate_y: f64,
    #[arg(long)]
    reflect_x: bool,
    /// Gaussian coordinate noise standard deviation.
    #[arg(long)]
    noise: Option<f64>,
    /// Frame dropout probability in [0, 1).
    #[arg(long)]
    dropout: Option<f64>,
    /// Required by --noise and --dropout for reproducible runs.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct StitchArgs {
    /// Clip files, in playback order.
    #[arg(required = true)]
    clips: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    padding: f64,
    /// Cut-point search window in frames (default: 25% of clip length).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    trim_fraction: f64,
    #[arg(long, default_value_t = 7)]
    savgol_window: usize,
    #[arg(long, default_value_t = 2)]
    savgol_polyorder: usize,
    /// Pre-align a hand to a body wrist, as HAND_COMPONENT:BODY_POINT.
    /// Repeatable.
    #[arg(long = "align-wrist")]
    align: Vec<String>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum FswDirection {
    /// FSW strings to token lines.
    Tokenize,
    /// Token lines back to FSW strings.
    Detokenize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HandednessArg {
    Left,
    Right,
}

impl From<HandednessArg> for Handedness {
    fn from(h: HandednessArg) -> Self {
        match h {
            HandednessArg::Left => Handedness::Left,
            HandednessArg::Right => Handedness::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Bio,
    Io,
}

impl From<SchemeArg> for TagScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Bio => TagScheme::Bio,
            SchemeArg::Io => TagScheme::Io,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Sign,
    Phrase,
}

impl From<KindArg> for SegmentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sign => SegmentKind::Sign,
            KindArg::Phrase => SegmentKind::Phrase,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EvalKind {
    Tags,
    Segments,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_pose_file(path: &Path) -> Result<Pose, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(anyhow::anyhow!("reading {}: {e}", path.display())))?;
    Ok(read_pose(&bytes)?)
}

fn write_pose_file(path: &Path, pose: &Pose) -> Result<(), CliError> {
    let bytes = write_pose(pose)?;
    fs::write(path, bytes)
        .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", path.display())))?;
    Ok(())
}

fn read_text(input: Option<&Path>) -> Result<String, CliError> {
    match input {
        Some(path) => Ok(fs::read_to_string(path)
            .map_err(|e| CliError::Data(anyhow::anyhow!("reading {}: {e}", path.display())))?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(anyhow::Error::from)?;
            Ok(buf)
        }
    }
}

fn write_text(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Info { file } => {
            let pose = read_pose_file(&file)?;
            print!("{}", info_text(&pose));
            Ok(())
        }
        Command::Convert { input, output } => convert(&input, &output),
        Command::Components { input, select, output } => {
            let pose = read_pose_file(&input)?;
            let names: Vec<&str> = select.iter().map(String::as_str).collect();
            write_pose_file(&output, &pose.select_components(&names)?)
        }
        Command::Normalize { input, shoulders, plane, output } => {
            let pose = read_pose_file(&input)?;
            let result = match (shoulders, plane) {
                (Some(s), None) => {
                    let [left, right] = s.as_slice() else {
                        return Err(usage("--shoulders expects two point names"));
                    };
                    normalize_shoulders(&pose, left, right)?
                }
                (None, Some(p)) => {
                    let [a, b, c] = p.as_slice() else {
                        return Err(usage("--plane expects three point names"));
                    };
                    normalize_plane(&pose, a, b, c)?
                }
                _ => return Err(usage("pass exactly one of --shoulders or --plane")),
            };
            write_pose_file(&output, &result)
        }
        Command::Augment(args) => augment(args),
        Command::Fps { input, new_fps, output } => {
            let pose = read_pose_file(&input)?;
            write_pose_file(&output, &interpolate_fps(&pose, new_fps)?)
        }
        Command::Flow { input, output } => {
            let pose = read_pose_file(&input)?;
            let flow = optical_flow(&pose);
            let mut csv = String::from("frame,person,point,flow\n");
            for f in 0..flow.frames() {
                for p in 0..flow.people() {
                    for pt in 0..flow.points() {
                        csv.push_str(&format!("{f},{p},{pt},{}\n", flow.value(f, p, pt)));
                    }
                }
            }
            write_text(output.as_deref(), &csv)
        }
        Command::HandNormalize { input, component, handedness, output } => {
            hand_normalize(&input, &component, handedness.into(), &output)
        }
        Command::HandMetrics { files, component, mace, cce, handedness } => {
            if mace == cce {
                return Err(usage("pass exactly one of --mace or --cce"));
            }
            let mut observations = Vec::with_capacity(files.len());
            for file in &files {
                let pose = read_pose_file(file)?;
                if pose.frames() == 0 {
                    return Err(usage(format!("{} has no frames", file.display())));
                }
                observations.push(extract_hand(&pose, 0, 0, &component, handedness.into())?);
            }
            let group = HandShapeGroup { shape_id: component, observations };
            let value = if mace { hand::mace(&group)? } else { hand::cce(&group)? };
            println!("{value}");
            Ok(())
        }
        Command::SegmentEncode { input, scheme, length, output } => {
            let segments = parse_segments(&read_text(input.as_deref())?)?;
            let tags = segments_to_tags(&segments, length, scheme.into())?;
            write_text(output.as_deref(), &format!("{tags}\n"))
        }
        Command::SegmentDecode { input, threshold_b, threshold_o, argmax, kind, output } => {
            for t in [threshold_b, threshold_o] {
                if !(0.0..=100.0).contains(&t) {
                    return Err(usage(format!("threshold {t} outside [0, 100]")));
                }
            }
            let probs = parse_probs_csv(&read_text(input.as_deref())?)?;
            let mode = if argmax {
                DecodeMode::Argmax
            } else {
                DecodeMode::Threshold { threshold_b, threshold_o }
            };
            let segments = decode_probs_with(&probs, mode, kind.into());
            write_text(output.as_deref(), &format_segments(&segments))
        }
        Command::SegmentTags { input, scheme, kind, output } => {
            let tags: TagSequence = read_text(input.as_deref())?.parse()?;
            let segments = tags_to_segments(&tags, scheme.into(), kind.into());
            write_text(output.as_deref(), &format_segments(&segments))
        }
        Command::SegmentEval { gold, pred, kind } => {
            let gold_text = read_text(Some(&gold))?;
            let pred_text = read_text(Some(&pred))?;
            match kind {
                EvalKind::Tags => {
                    let g: TagSequence = gold_text.parse()?;
                    let p: TagSequence = pred_text.parse()?;
                    println!("f1: {}", frame_f1(&g, &p)?);
                }
                EvalKind::Segments => {
                    let g = parse_segments(&gold_text)?;
                    let p = parse_segments(&pred_text)?;
                    println!("iou: {}", segment_iou(&g, &p)?);
                    println!("percentage: {}", segment_percentage(&g, &p)?);
                }
            }
            Ok(())
        }
        Command::Stitch(args) => run_stitch(args),
        Command::Fsw { direction } => run_fsw(direction),
        Command::Bench { frames, iters, seed, out_dir, csv } => {
            run_bench(&frames, iters, seed, out_dir, csv)
        }
        Command::Render { input, out_dir, width, height, radius, background, confidence_floor } => {
            let pose = read_pose_file(&input)?;
            if background.len() != 3 {
                return Err(usage("--background expects R,G,B"));
            }
            let config = RenderConfig {
                canvas: match (width, height) {
                    (Some(w), Some(h)) => Some((w, h)),
                    (None, None) => None,
                    _ => return Err(usage("pass both --width and --height or neither")),
                },
                point_radius: radius,
                background: (background[0], background[1], background[2]),
                confidence_floor,
            };
            for path in render_sequence(&pose, &out_dir, &config)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn info_text(pose: &Pose) -> String {
    let h = &pose.header;
    let mut out = String::new();
    out.push_str(&format!("version: {}\n", h.version));
    out.push_str(&format!("canvas: {} x {} x {}\n", h.width, h.height, h.depth));
    out.push_str(&format!("fps: {}\n", pose.fps()));
    out.push_str(&format!("people: {}\n", pose.body.people()));
    out.push_str(&format!("frames: {}\n", pose.frames()));
    out.push_str(&format!(
        "points: {} across {} components, {} axes\n",
        h.total_points(),
        h.components.len(),
        h.axis_count()
    ));
    for c in &h.components {
        out.push_str(&format!(
            "  {}: {} points, {} limbs, format {}\n",
            c.name,
            c.point_count(),
            c.limbs.len(),
            c.format
        ));
    }
    out
}

fn convert(input: &Path, output: &Path) -> CliResult {
    let ext = |p: &Path| p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match (ext(input).as_deref(), ext(output).as_deref()) {
        (Some("json"), Some("pose")) => {
            let json = fs::read_to_string(input)
                .map_err(|e| CliError::Data(anyhow::anyhow!("reading {}: {e}", input.display())))?;
            write_pose_file(output, &ingest_openpose(&json)?)
        }
        (Some("pose"), Some("json")) => {
            let pose = read_pose_file(input)?;
            let json = to_openpose_json(&pose)?;
            fs::write(output, json)
                .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", output.display())))?;
            Ok(())
        }
        _ => Err(usage("convert needs a .json/.pose input/output pair")),
    }
}

fn augment(args: AugmentArgs) -> CliResult {
    if (args.noise.is_some() || args.dropout.is_some()) && args.seed.is_none() {
        return Err(usage("--noise and --dropout require --seed"));
    }
    if args.scale <= 0.0 {
        return Err(usage("--scale must be positive"));
    }
    if let Some(p) = args.dropout {
        if !(0.0..1.0).contains(&p) {
            return Err(usage("--dropout must be in [0, 1)"));
        }
    }
    if let Some(s) = args.noise {
        if s < 0.0 {
            return Err(usage("--noise must be non-negative"));
        }
    }

    let mut pose = read_pose_file(&args.input)?;
    let params = AffineParams {
        rotation_deg: args.rotate,
        scale: args.scale,
        shear_x: args.shear_x,
        shear_y: args.shear_y,
        translate: [args.translate_x, args.translate_y],
        reflect_x: args.reflect_x,
    };
    if params != AffineParams::default() {
        pose = affine_augment(&pose, &params);
    }
    if let Some(sigma) = args.noise {
        pose = gaussian_noise(&pose, sigma, args.seed.unwrap());
    }
    if let Some(p) = args.dropout {
        pose = frame_dropout(&pose, p, args.seed.unwrap());
    }
    write_pose_file(&args.output, &pose)
}

fn extract_hand(
    pose: &Pose,
    frame: usize,
    person: usize,
    component: &str,
    handedness: Handedness,
) -> Result<HandPose, CliError> {
    let spec = pose
        .header
        .component(component)
        .ok_or_else(|| usage(format!("component {component:?} not in header")))?;
    if spec.point_count() != hand::HAND_LANDMARKS {
        return Err(usage(format!(
            "component {component:?} has {} points, a hand needs {}",
            spec.point_count(),
            hand::HAND_LANDMARKS
        )));
    }
    let offset = pose.header.component_offset(component).unwrap();
    let axes = pose.body.axes();
    let mut landmarks = [[0.0f64; 3]; hand::HAND_LANDMARKS];
    let mut confidence = [0.0f64; hand::HAND_LANDMARKS];
    for l in 0..hand::HAND_LANDMARKS {
        let coords = pose.body.coords(frame, person, offset + l);
        for a in 0..axes.min(3) {
            landmarks[l][a] = coords[a] as f64;
        }
        confidence[l] = pose.body.conf(frame, person, offset + l) as f64;
    }
    Ok(HandPose { landmarks, confidence, handedness })
}

fn hand_normalize(
    input: &Path,
    component: &str,
    handedness: Handedness,
    output: &Path,
) -> CliResult {
    let pose = read_pose_file(input)?;
    let offset = pose
        .header
        .component_offset(component)
        .ok_or_else(|| usage(format!("component {component:?} not in header")))?;
    let axes = pose.body.axes();
    let mut out = pose.clone();
    let mut skipped = 0usize;
    for f in 0..pose.frames() {
        for p in 0..pose.body.people() as usize {
            let hand_pose = extract_hand(&pose, f, p, component, handedness)?;
            match hand::normalize_hand_3d(&hand_pose) {
                Ok(normalized) => {
                    for l in 0..hand::HAND_LANDMARKS {
                        let coords = out.body.coords_mut(f, p, offset + l);
                        for a in 0..axes.min(3) {
                            coords[a] = normalized.landmarks[l][a] as f32;
                        }
                    }
                }
                Err(_) => skipped += 1,
            }
        }
    }
    if skipped > 0 {
        eprintln!("skipped {skipped} frame(s) that could not be normalized");
    }
    write_pose_file(output, &out)
}

fn run_stitch(args: StitchArgs) -> CliResult {
    let config = StitchConfig {
        padding_seconds: args.padding,
        search_window: args.window,
        trim_flow_fraction: args.trim_fraction,
        savgol_window: args.savgol_window,
        savgol_polyorder: args.savgol_polyorder,
        ..StitchConfig::default()
    };
    let mut clips = Vec::with_capacity(args.clips.len());
    for path in &args.clips {
        let mut clip = read_pose_file(path)?;
        for spec in &args.align {
            let (hand_component, body_point) = spec
                .split_once(':')
                .ok_or_else(|| usage("--align-wrist expects HAND_COMPONENT:BODY_POINT"))?;
            clip = align_wrist(&clip, hand_component, body_point)?;
        }
        clips.push(clip);
    }
    write_pose_file(&args.output, &stitch(&clips, &config)?)
}

fn run_fsw(direction: FswDirection) -> CliResult {
    let text = read_text(None)?;
    let mut out = String::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            out.push('\n');
            continue;
        }
        match direction {
            FswDirection::Tokenize => {
                let signs = fsw::parse_fsw(line)?;
                out.push_str(&fsw::tokenize_all(&signs).to_string());
            }
            FswDirection::Detokenize => {
                let stream: fsw::FswTokenStream = line.parse()?;
                out.push_str(&fsw::detokenize(&stream)?);
            }
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn run_bench(
    frames: &[usize],
    iters: usize,
    seed: u64,
    out_dir: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> CliResult {
    let dir = out_dir.unwrap_or_else(|| {
        std::env::temp_dir().join(format!("posekit_bench_{}", std::process::id()))
    });
    let mut report = BenchReport::default();
    for &n in frames {
        if n == 0 {
            return Err(usage("--frames entries must be positive"));
        }
        let (json_path, pose_path) = make_benchmark_pair(n, seed, &dir)?;
        report.cases.push(bench_read(&json_path, &pose_path, iters)?);
    }
    print!("{}", report.to_text());
    if let Some(path) = csv {
        fs::write(&path, report.to_csv())
            .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
