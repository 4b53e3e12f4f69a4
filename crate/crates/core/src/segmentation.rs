//! Frame tagging codecs (BIO and IO), the greedy probability-to-segment
//! decoder, and frame/segment evaluation metrics.
//!
//! Serialized forms: a tag sequence is one line of `B`/`I`/`O` characters;
//! segment lists are TSV lines `start<TAB>end<TAB>kind` with inclusive frame
//! indices; probability series are CSV with header `b,i,o` and values on a
//! 0-100 scale.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SegmentationError {
    #[error("segments overlap or are unsorted at index {0}")]
    OverlappingSegments(usize),
    #[error("segment [{start}, {end}] exceeds frame count {length}")]
    OutOfRange { start: usize, end: usize, length: usize },
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("gold segment list is empty")]
    EmptyGold,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentKind {
    #[default]
    Sign,
    Phrase,
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentKind::Sign => write!(f, "sign"),
            SegmentKind::Phrase => write!(f, "phrase"),
        }
    }
}

impl FromStr for SegmentKind {
    type Err = SegmentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sign" => Ok(SegmentKind::Sign),
            "phrase" => Ok(SegmentKind::Phrase),
            other => Err(SegmentationError::Parse(format!("unknown segment kind {other:?}"))),
        }
    }
}

/// A span of frames, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn new(start: usize, end: usize, kind: SegmentKind) -> Self {
        debug_assert!(start <= end);
        Self { start, end, kind }
    }

    pub fn frame_count(&self) -> usize {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    B,
    I,
    O,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagScheme {
    Bio,
    Io,
}

/// Per-frame B/I/O labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSequence {
    pub tags: Vec<Tag>,
}

impl TagSequence {
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tags {
            let c = match t {
                Tag::B => 'B',
                Tag::I => 'I',
                Tag::O => 'O',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TagSequence {
    type Err = SegmentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tags = s
            .trim()
            .chars()
            .map(|c| match c {
                'B' => Ok(Tag::B),
                'I' => Ok(Tag::I),
                'O' => Ok(Tag::O),
                other => Err(SegmentationError::Parse(format!("unexpected tag {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TagSequence { tags })
    }
}

/// Per-frame (b, i, o) probabilities on a 0-100 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbSeries {
    rows: Vec<(f64, f64, f64)>,
}

impl ProbSeries {
    pub fn new(rows: Vec<(f64, f64, f64)>) -> Result<Self, SegmentationError> {
        for (i, &(b, p_i, o)) in rows.iter().enumerate() {
            for v in [b, p_i, o] {
                if !(0.0..=100.0).contains(&v) {
                    return Err(SegmentationError::Parse(format!(
                        "probability {v} out of [0, 100] at row {i}"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(f64, f64, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Converts a sorted, non-overlapping segment list to per-frame tags.
/// BIO marks each segment's first frame `B` and the rest `I`; IO marks every
/// segment frame `I`. Everything else is `O`.
pub fn segments_to_tags(
    segments: &[Segment],
    length: usize,
    scheme: TagScheme,
) -> Result<TagSequence, SegmentationError> {
    let mut tags = vec![Tag::O; length];
    let mut prev_end: Option<usize> = None;
    for (i, seg) in segments.iter().enumerate() {
        if seg.start > seg.end {
            return Err(SegmentationError::OverlappingSegments(i));
        }
        if let Some(pe) = prev_end {
            if seg.start <= pe {
                return Err(SegmentationError::OverlappingSegments(i));
            }
        }
        if seg.end >= length {
            return Err(SegmentationError::OutOfRange { start: seg.start, end: seg.end, length });
        }
        for f in seg.start..=seg.end {
            tags[f] = if scheme == TagScheme::Bio && f == seg.start { Tag::B } else { Tag::I };
        }
        prev_end = Some(seg.end);
    }
    Ok(TagSequence { tags })
}

/// Decodes tags back into segments. Under BIO, a segment opens at each `B`
/// and closes before the next `B` or `O` (or at the end); an `I` with no
/// preceding `B` also opens a segment, leniently. Under IO, maximal runs of
/// non-`O` tags become segments. Total: never fails.
pub fn tags_to_segments(tags: &TagSequence, scheme: TagScheme, kind: SegmentKind) -> Vec<Segment> {
    tags_to_segments_counted(tags, scheme, kind).0
}

/// Like [`tags_to_segments`], also returning how many segments were opened
/// leniently by an `I` that did not follow a `B` or `I` under BIO.
pub fn tags_to_segments_counted(
    tags: &TagSequence,
    scheme: TagScheme,
    kind: SegmentKind,
) -> (Vec<Segment>, usize) {
    let mut segments = Vec::new();
    let mut lenient = 0usize;
    let mut open: Option<usize> = None;
    for (f, &tag) in tags.tags.iter().enumerate() {
        match (scheme, tag) {
            (TagScheme::Bio, Tag::B) => {
                if let Some(start) = open.take() {
                    segments.push(Segment::new(start, f - 1, kind));
                }
                open = Some(f);
            }
            (TagScheme::Bio, Tag::I) | (TagScheme::Io, Tag::I) | (TagScheme::Io, Tag::B) => {
                if open.is_none() {
                    if scheme == TagScheme::Bio {
                        lenient += 1;
                    }
                    open = Some(f);
                }
            }
            (_, Tag::O) => {
                if let Some(start) = open.take() {
                    segments.push(Segment::new(start, f - 1, kind));
                }
            }
        }
    }
    if let Some(start) = open {
        segments.push(Segment::new(start, tags.len() - 1, kind));
    }
    (segments, lenient)
}

/// Frame triggering rule for the segment decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecodeMode {
    /// A frame b-triggers when `b > threshold_b`, o-triggers when
    /// `o > threshold_o` (strict comparisons, 0-100 scale).
    Threshold { threshold_b: f64, threshold_o: f64 },
    /// A frame b-triggers when b is the largest of (b, i, o) and o-triggers
    /// when o is strictly the largest; ties prefer b over i over o.
    Argmax,
}

impl DecodeMode {
    fn b_triggers(&self, row: (f64, f64, f64)) -> bool {
        match *self {
            DecodeMode::Threshold { threshold_b, .. } => row.0 > threshold_b,
            DecodeMode::Argmax => row.0 >= row.1 && row.0 >= row.2,
        }
    }

    /// Marks the scan as past the segment start. Distinct from
    /// `!b_triggers`: a threshold-mode frame with `b == threshold_b` neither
    /// triggers nor fails.
    fn b_fails(&self, row: (f64, f64, f64)) -> bool {
        match *self {
            DecodeMode::Threshold { threshold_b, .. } => row.0 < threshold_b,
            DecodeMode::Argmax => !(row.0 >= row.1 && row.0 >= row.2),
        }
    }

    fn o_triggers(&self, row: (f64, f64, f64)) -> bool {
        match *self {
            DecodeMode::Threshold { threshold_o, .. } => row.2 > threshold_o,
            DecodeMode::Argmax => row.2 > row.0 && row.2 > row.1,
        }
    }
}

/// Greedy scan converting per-frame probabilities to segments with the
/// default thresholds semantics. See [`decode_probs_with`].
pub fn decode_probs(probs: &ProbSeries, threshold_b: f64, threshold_o: f64) -> Vec<Segment> {
    decode_probs_with(probs, DecodeMode::Threshold { threshold_b, threshold_o }, SegmentKind::Sign)
}

/// Greedy scan converting per-frame probabilities to segments.
///
/// A segment starts at the first b-triggering frame. Once a subsequent frame
/// fails the b trigger (the scan has "passed the start"), the segment closes
/// exclusive at the next frame that b- or o-triggers; a closing frame that
/// b-triggers immediately opens the next segment. A segment still open at the
/// end of input closes at the last frame. The middle (`i`) probability is
/// never consulted by the threshold mode.
pub fn decode_probs_with(probs: &ProbSeries, mode: DecodeMode, kind: SegmentKind) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut start: Option<usize> = None;
    let mut did_pass_start = false;

    for (f, &row) in probs.rows().iter().enumerate() {
        match start {
            None => {
                if mode.b_triggers(row) {
                    start = Some(f);
                    did_pass_start = false;
                }
            }
            Some(s) => {
                if did_pass_start {
                    if mode.b_triggers(row) || mode.o_triggers(row) {
                        segments.push(Segment::new(s, f - 1, kind));
                        if mode.b_triggers(row) {
                            start = Some(f);
                            did_pass_start = false;
                        } else {
                            start = None;
                        }
                    }
                } else if mode.b_fails(row) {
                    did_pass_start = true;
                }
            }
        }
    }
    if let Some(s) = start {
        segments.push(Segment::new(s, probs.len() - 1, kind));
    }
    segments
}

/// Macro-averaged per-class F1 over the three tags. A class absent from both
/// sequences contributes 1 to the average.
pub fn frame_f1(gold: &TagSequence, pred: &TagSequence) -> Result<f64, SegmentationError> {
    if gold.len() != pred.len() {
        return Err(SegmentationError::LengthMismatch(gold.len(), pred.len()));
    }
    let mut sum = 0.0;
    for class in [Tag::B, Tag::I, Tag::O] {
        let mut tp = 0u64;
        let mut fp = 0u64;
        let mut fn_ = 0u64;
        for (&g, &p) in gold.tags.iter().zip(&pred.tags) {
            match (g == class, p == class) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                (false, false) => {}
            }
        }
        sum += if tp + fp + fn_ == 0 {
            1.0
        } else {
            2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
        };
    }
    Ok(sum / 3.0)
}

fn check_non_overlapping(segments: &[Segment]) -> Result<Vec<Segment>, SegmentationError> {
    let mut sorted = segments.to_vec();
    sorted.sort_by_key(|s| (s.start, s.end));
    for i in 1..sorted.len() {
        if sorted[i].start <= sorted[i - 1].end {
            return Err(SegmentationError::OverlappingSegments(i));
        }
    }
    Ok(sorted)
}

/// Frame-set intersection over union between two segment lists; 1 when both
/// are empty. Segments within one list must not overlap.
pub fn segment_iou(gold: &[Segment], pred: &[Segment]) -> Result<f64, SegmentationError> {
    let gold = check_non_overlapping(gold)?;
    let pred = check_non_overlapping(pred)?;
    let gold_frames: usize = gold.iter().map(Segment::frame_count).sum();
    let pred_frames: usize = pred.iter().map(Segment::frame_count).sum();

    let mut intersection = 0usize;
    let (mut gi, mut pi) = (0, 0);
    while gi < gold.len() && pi < pred.len() {
        let g = &gold[gi];
        let p = &pred[pi];
        let lo = g.start.max(p.start);
        let hi = g.end.min(p.end);
        if lo <= hi {
            intersection += hi - lo + 1;
        }
        if g.end <= p.end {
            gi += 1;
        } else {
            pi += 1;
        }
    }

    let union = gold_frames + pred_frames - intersection;
    Ok(if union == 0 { 1.0 } else { intersection as f64 / union as f64 })
}

/// Predicted-to-gold segment count ratio; the optimum is 1.
pub fn segment_percentage(gold: &[Segment], pred: &[Segment]) -> Result<f64, SegmentationError> {
    if gold.is_empty() {
        return Err(SegmentationError::EmptyGold);
    }
    Ok(pred.len() as f64 / gold.len() as f64)
}

/// Formats segments as TSV lines `start<TAB>end<TAB>kind`.
pub fn format_segments(segments: &[Segment]) -> String {
    let mut out = String::new();
    for s in segments {
        out.push_str(&format!("{}\t{}\t{}\n", s.start, s.end, s.kind));
    }
    out
}

/// Parses the TSV segment format produced by [`format_segments`].
pub fn parse_segments(text: &str) -> Result<Vec<Segment>, SegmentationError> {
    let mut segments = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let mut field = |name: &str| {
            parts
                .next()
                .ok_or_else(|| SegmentationError::Parse(format!("line {}: missing {name}", ln + 1)))
        };
        let start = field("start")?
            .parse::<usize>()
            .map_err(|e| SegmentationError::Parse(format!("line {}: {e}", ln + 1)))?;
        let end = field("end")?
            .parse::<usize>()
            .map_err(|e| SegmentationError::Parse(format!("line {}: {e}", ln + 1)))?;
        let kind = field("kind")?.parse::<SegmentKind>()?;
        if start > end {
            return Err(SegmentationError::Parse(format!("line {}: start > end", ln + 1)));
        }
        segments.push(Segment::new(start, end, kind));
    }
    Ok(segments)
}

/// Formats a probability series as CSV with header `b,i,o`.
pub fn format_probs_csv(probs: &ProbSeries) -> String {
    let mut out = String::from("b,i,o\n");
    for &(b, i, o) in probs.rows() {
        out.push_str(&format!("{b},{i},{o}\n"));
    }
    out
}

/// Parses the CSV probability format produced by [`format_probs_csv`].
pub fn parse_probs_csv(text: &str) -> Result<ProbSeries, SegmentationError> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("b,i,o") => {}
        other => {
            return Err(SegmentationError::Parse(format!(
                "expected header \"b,i,o\", found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| SegmentationError::Parse(format!("line {}: {e}", ln + 2)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != 3 {
            return Err(SegmentationError::Parse(format!(
                "line {}: expected 3 values, found {}",
                ln + 2,
                values.len()
            )));
        }
        rows.push((values[0], values[1], values[2]));
    }
    ProbSeries::new(rows)
}
