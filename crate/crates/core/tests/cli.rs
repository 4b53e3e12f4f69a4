//! Golden tests: every CLI subcommand must produce the same result as the
//! library call it wraps, and exit codes must follow the 0/1/2 convention.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use posekit::container::{generate_synthetic, read_pose, write_pose, ComponentSpec, Pose};
use posekit::hand::{canonical_hand, LANDMARK_NAMES};
use posekit::openpose::{full_component_layout, ingest_openpose, to_openpose_json};
use posekit::ops::{interpolate_fps, normalize_shoulders, optical_flow};
use posekit::segmentation::{
    decode_probs, format_probs_csv, format_segments, frame_f1, segments_to_tags, ProbSeries,
    Segment, SegmentKind, TagScheme,
};

const BIN: &str = env!("CARGO_BIN_EXE_posekit");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn posekit")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn posekit");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().expect("wait for posekit")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn body_spec() -> Vec<ComponentSpec> {
    vec![ComponentSpec::new(
        "BODY",
        "XYC",
        vec!["LShoulder".into(), "RShoulder".into(), "Nose".into()],
    )]
}

fn write_fixture(dir: &Path, name: &str, pose: &Pose) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, write_pose(pose).unwrap()).unwrap();
    path
}

#[test]
fn exit_codes_follow_the_convention() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["definitely-not-a-subcommand"]).status.code(), Some(1));
    assert_eq!(run(&["info"]).status.code(), Some(1)); // missing argument
    assert_eq!(run(&["info", "/nonexistent.pose"]).status.code(), Some(2));
    // Usage-level validation of flag combinations.
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "p.pose", &generate_synthetic(3, 1, &body_spec(), 1));
    let out = dir.path().join("o.pose");
    let result = run(&[
        "augment",
        input.to_str().unwrap(),
        "--noise",
        "0.5",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1), "noise without seed is a usage error");
}

#[test]
fn info_reports_the_header_and_frame_count() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(7, 2, &body_spec(), 3);
    let input = write_fixture(dir.path(), "p.pose", &pose);
    let text = stdout(&run(&["info", input.to_str().unwrap()]));
    assert!(text.contains("frames: 7"));
    assert!(text.contains("people: 2"));
    assert!(text.contains("BODY: 3 points"));
}

#[test]
fn fsw_tokenize_matches_the_worked_example() {
    let out = run_with_stdin(&["fsw", "tokenize"], "M518x529S14c20481x471S27106503x489\n");
    assert_eq!(stdout(&out), "M p518 p529 S14c c2 r0 p481 p471 S271 c0 r6 p503 p489\n");
    let back = run_with_stdin(
        &["fsw", "detokenize"],
        "M p518 p529 S14c c2 r0 p481 p471 S271 c0 r6 p503 p489\n",
    );
    assert_eq!(stdout(&back), "M518x529S14c20481x471S27106503x489\n");
}

#[test]
fn segment_decode_of_silence_is_empty() {
    let csv = "b,i,o\n0,0,0\n0,0,0\n0,0,0\n";
    let out = run_with_stdin(&["segment-decode", "--tb", "50", "--to", "50"], csv);
    assert_eq!(stdout(&out), "");
}

#[test]
fn segment_pipeline_matches_the_library() {
    let probs = ProbSeries::new(vec![
        (90.0, 5.0, 5.0),
        (10.0, 80.0, 5.0),
        (10.0, 80.0, 5.0),
        (90.0, 5.0, 5.0),
        (10.0, 5.0, 90.0),
    ])
    .unwrap();
    let csv = format_probs_csv(&probs);
    let cli_segments = stdout(&run_with_stdin(&["segment-decode"], &csv));
    let lib_segments = format_segments(&decode_probs(&probs, 50.0, 50.0));
    assert_eq!(cli_segments, lib_segments);

    // Encode those segments to tags and evaluate against themselves.
    let dir = tempfile::tempdir().unwrap();
    let seg_path = dir.path().join("segments.tsv");
    fs::write(&seg_path, &lib_segments).unwrap();
    let cli_tags = stdout(&run(&[
        "segment-encode",
        seg_path.to_str().unwrap(),
        "--scheme",
        "bio",
        "--length",
        "5",
    ]));
    let gold = decode_probs(&probs, 50.0, 50.0);
    let lib_tags = segments_to_tags(&gold, 5, TagScheme::Bio).unwrap();
    assert_eq!(cli_tags.trim(), lib_tags.to_string());

    let tag_path = dir.path().join("tags.txt");
    fs::write(&tag_path, format!("{lib_tags}\n")).unwrap();
    let eval = stdout(&run(&[
        "segment-eval",
        "--gold",
        tag_path.to_str().unwrap(),
        "--pred",
        tag_path.to_str().unwrap(),
        "--kind",
        "tags",
    ]));
    let f1 = frame_f1(&lib_tags, &lib_tags).unwrap();
    assert_eq!(eval.trim(), format!("f1: {f1}"));
}

#[test]
fn segment_eval_on_segment_files_reports_iou_and_percentage() {
    let dir = tempfile::tempdir().unwrap();
    let gold = vec![Segment::new(0, 9, SegmentKind::Sign)];
    let pred = vec![Segment::new(5, 14, SegmentKind::Sign)];
    let gold_path = dir.path().join("gold.tsv");
    let pred_path = dir.path().join("pred.tsv");
    fs::write(&gold_path, format_segments(&gold)).unwrap();
    fs::write(&pred_path, format_segments(&pred)).unwrap();
    let text = stdout(&run(&[
        "segment-eval",
        "--gold",
        gold_path.to_str().unwrap(),
        "--pred",
        pred_path.to_str().unwrap(),
        "--kind",
        "segments",
    ]));
    let iou: f64 = text
        .lines()
        .find(|l| l.starts_with("iou:"))
        .and_then(|l| l.split(':').nth(1))
        .map(str::trim)
        .unwrap()
        .parse()
        .unwrap();
    assert!((iou - 1.0 / 3.0).abs() < 1e-12);
    assert!(text.contains("percentage: 1"));
}

#[test]
fn convert_roundtrips_between_json_and_pose() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(4, 1, &full_component_layout(), 11);
    let pose_path = write_fixture(dir.path(), "a.pose", &pose);
    let json_path = dir.path().join("a.json");
    stdout(&run(&[
        "convert",
        pose_path.to_str().unwrap(),
        json_path.to_str().unwrap(),
    ]));
    let json = fs::read_to_string(&json_path).unwrap();
    assert_eq!(json, to_openpose_json(&pose).unwrap());

    let back_path = dir.path().join("b.pose");
    stdout(&run(&[
        "convert",
        json_path.to_str().unwrap(),
        back_path.to_str().unwrap(),
    ]));
    let back = read_pose(&fs::read(&back_path).unwrap()).unwrap();
    assert_eq!(back, ingest_openpose(&json).unwrap());
    assert_eq!(back, pose);
}

#[test]
fn components_selects_both_hands() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(2, 1, &full_component_layout(), 5);
    let input = write_fixture(dir.path(), "full.pose", &pose);
    let out = dir.path().join("hands.pose");
    stdout(&run(&[
        "components",
        input.to_str().unwrap(),
        "--select",
        "hand_left_keypoints_2d,hand_right_keypoints_2d",
        "-o",
        out.to_str().unwrap(),
    ]));
    let selected = read_pose(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(selected.body.points(), 42);
    assert_eq!(
        selected,
        pose.select_components(&["hand_left_keypoints_2d", "hand_right_keypoints_2d"]).unwrap()
    );
}

#[test]
fn normalize_and_fps_are_thin_adapters() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(6, 1, &body_spec(), 13);
    let input = write_fixture(dir.path(), "p.pose", &pose);

    let out = dir.path().join("norm.pose");
    stdout(&run(&[
        "normalize",
        input.to_str().unwrap(),
        "--shoulders",
        "LShoulder,RShoulder",
        "-o",
        out.to_str().unwrap(),
    ]));
    let cli_result = read_pose(&fs::read(&out).unwrap()).unwrap();
    let lib_result = normalize_shoulders(&pose, "LShoulder", "RShoulder").unwrap();
    assert_eq!(cli_result, lib_result);

    let out = dir.path().join("fps.pose");
    stdout(&run(&["fps", input.to_str().unwrap(), "--to", "50", "-o", out.to_str().unwrap()]));
    let cli_result = read_pose(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(cli_result, interpolate_fps(&pose, 50).unwrap());
}

#[test]
fn flow_csv_matches_the_library_values() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(4, 1, &body_spec(), 17);
    let input = write_fixture(dir.path(), "p.pose", &pose);
    let text = stdout(&run(&["flow", input.to_str().unwrap()]));
    let flow = optical_flow(&pose);
    let mut want = String::from("frame,person,point,flow\n");
    for f in 0..flow.frames() {
        for p in 0..flow.people() {
            for pt in 0..flow.points() {
                want.push_str(&format!("{f},{p},{pt},{}\n", flow.value(f, p, pt)));
            }
        }
    }
    assert_eq!(text, want);
}

fn hand_fixture() -> Pose {
    let spec = ComponentSpec::new(
        "RIGHT_HAND",
        "XYZC",
        LANDMARK_NAMES.iter().map(|s| s.to_string()).collect(),
    );
    let mut pose = generate_synthetic(1, 1, &[spec], 1);
    let hand = canonical_hand();
    for (l, lm) in hand.landmarks.iter().enumerate() {
        let c = pose.body.coords_mut(0, 0, l);
        c[0] = lm[0] as f32;
        c[1] = lm[1] as f32;
        c[2] = lm[2] as f32;
        pose.body.set_conf(0, 0, l, 1.0);
    }
    pose
}

#[test]
fn hand_metrics_of_identical_observations_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let pose = hand_fixture();
    let a = write_fixture(dir.path(), "a.pose", &pose);
    let b = write_fixture(dir.path(), "b.pose", &pose);
    let text = stdout(&run(&[
        "hand-metrics",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--component",
        "RIGHT_HAND",
        "--mace",
    ]));
    let value: f64 = text.trim().parse().unwrap();
    assert!(value < 1e-9, "mace {value}");
}

#[test]
fn hand_normalize_puts_the_wrist_at_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let pose = hand_fixture();
    let input = write_fixture(dir.path(), "hand.pose", &pose);
    let out = dir.path().join("norm.pose");
    stdout(&run(&[
        "hand-normalize",
        input.to_str().unwrap(),
        "--component",
        "RIGHT_HAND",
        "-o",
        out.to_str().unwrap(),
    ]));
    let result = read_pose(&fs::read(&out).unwrap()).unwrap();
    let wrist = result.body.coords(0, 0, 0);
    assert!(wrist.iter().all(|v| v.abs() < 1e-4), "wrist {wrist:?}");
    let m_mcp = result.body.coords(0, 0, 9);
    assert!((m_mcp[1] - 200.0).abs() < 1e-2, "m_mcp {m_mcp:?}");
}

#[test]
fn stitch_writes_a_joined_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = generate_synthetic(8, 1, &body_spec(), 21);
    for c in a.body.confidences_mut() {
        *c = 1.0;
    }
    let b = a.clone();
    let pa = write_fixture(dir.path(), "a.pose", &a);
    let pb = write_fixture(dir.path(), "b.pose", &b);
    let out = dir.path().join("stitched.pose");
    stdout(&run(&[
        "stitch",
        pa.to_str().unwrap(),
        pb.to_str().unwrap(),
        "--padding",
        "0.2",
        "-o",
        out.to_str().unwrap(),
    ]));
    let stitched = read_pose(&fs::read(&out).unwrap()).unwrap();
    assert!(stitched.frames() > 0);
    assert_eq!(stitched.fps(), 25);
    assert!(stitched.validate().is_empty());
}

#[test]
fn render_writes_deterministic_ppm_frames() {
    let dir = tempfile::tempdir().unwrap();
    let pose = generate_synthetic(3, 1, &body_spec(), 23);
    let input = write_fixture(dir.path(), "p.pose", &pose);
    let out_a = dir.path().join("frames_a");
    let out_b = dir.path().join("frames_b");
    let listed = stdout(&run(&[
        "render",
        input.to_str().unwrap(),
        "--out-dir",
        out_a.to_str().unwrap(),
    ]));
    assert_eq!(listed.lines().count(), 3);
    stdout(&run(&["render", input.to_str().unwrap(), "--out-dir", out_b.to_str().unwrap()]));
    for f in 0..3 {
        let name = format!("frame_{f:05}.ppm");
        let a = fs::read(out_a.join(&name)).unwrap();
        let b = fs::read(out_b.join(&name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

#[test]
fn bench_rejects_too_few_iterations_and_runs_with_enough() {
    let dir = tempfile::tempdir().unwrap();
    let bad = run(&[
        "bench",
        "--frames",
        "10",
        "--iters",
        "1",
        "--seed",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));

    let good = run(&[
        "bench",
        "--frames",
        "10",
        "--iters",
        "5",
        "--seed",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let text = stdout(&good);
    assert!(text.contains("json parse"));
    assert!(text.contains("10"));
}
