//! C ABI over the posekit library.
//!
//! Conventions: every fallible call returns a [`PkStatus`] and writes its
//! result through an out pointer. `PK_STATUS_OK` is zero; on any other
//! status, [`pk_last_error_message`] returns a thread-local description of
//! the failure. Poses travel as opaque `PkPose` handles owned by this
//! library; every allocating call has a matching `pk_*_free`, and freeing a
//! null pointer is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs;
use std::path::PathBuf;
use std::ptr;

use posekit::container::{read_pose, write_pose, Pose};
use posekit::fsw;
use posekit::ops;
use posekit::segmentation::{decode_probs, ProbSeries};
use posekit::stitch;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// File could not be read or written.
    Io = 3,
    /// Malformed `.pose` payload or violated container invariant.
    Format = 4,
    /// A numeric transform rejected its input.
    Ops = 5,
    /// Stitching failed.
    Stitch = 6,
    /// Formal SignWriting input or token stream was malformed.
    Fsw = 7,
    /// Probability rows were out of range.
    Segmentation = 8,
    /// An argument value was out of range.
    InvalidArgument = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(status: PkStatus, message: impl Into<Vec<u8>>) -> PkStatus {
    let message = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    status
}

/// Message of the most recent failure on this thread, or null when the last
/// call succeeded. The pointer stays valid until the next failing call on
/// the same thread; do not free it.
#[no_mangle]
pub extern "C" fn pk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.as_ptr(),
        None => ptr::null(),
    })
}

/// An in-memory pose: header plus coordinate and confidence tensors.
pub struct PkPose {
    inner: Pose,
}

/// One decoded segment, frame indices inclusive.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PkSegment {
    pub start: u64,
    pub end: u64,
}

unsafe fn cstr<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PkStatus> {
    if ptr.is_null() {
        return Err(set_error(PkStatus::NullPointer, format!("{what} is null")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| set_error(PkStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn hand_out(out: *mut *mut PkPose, pose: Pose) -> PkStatus {
    if out.is_null() {
        return set_error(PkStatus::NullPointer, "out pointer is null");
    }
    unsafe { *out = Box::into_raw(Box::new(PkPose { inner: pose })) };
    PkStatus::Ok
}

unsafe fn pose_ref<'a>(pose: *const PkPose) -> Result<&'a Pose, PkStatus> {
    if pose.is_null() {
        return Err(set_error(PkStatus::NullPointer, "pose handle is null"));
    }
    Ok(unsafe { &(*pose).inner })
}

/// Reads a `.pose` file into a new handle.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_read_file(path: *const c_char, out: *mut *mut PkPose) -> PkStatus {
    let path = match unsafe { cstr(path, "path") } {
        Ok(p) => PathBuf::from(p),
        Err(s) => return s,
    };
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) => return set_error(PkStatus::Io, format!("reading {}: {e}", path.display())),
    };
    match read_pose(&bytes) {
        Ok(pose) => hand_out(out, pose),
        Err(e) => set_error(PkStatus::Format, e.to_string()),
    }
}

/// Parses an in-memory `.pose` payload.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_read_bytes(
    bytes: *const u8,
    len: usize,
    out: *mut *mut PkPose,
) -> PkStatus {
    if bytes.is_null() {
        return set_error(PkStatus::NullPointer, "bytes is null");
    }
    let slice = unsafe { std::slice::from_raw_parts(bytes, len) };
    match read_pose(slice) {
        Ok(pose) => hand_out(out, pose),
        Err(e) => set_error(PkStatus::Format, e.to_string()),
    }
}

/// Serializes a pose to a `.pose` file.
///
/// # Safety
/// `pose` must be a live handle and `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_write_file(pose: *const PkPose, path: *const c_char) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let path = match unsafe { cstr(path, "path") } {
        Ok(p) => PathBuf::from(p),
        Err(s) => return s,
    };
    let bytes = match write_pose(pose) {
        Ok(b) => b,
        Err(e) => return set_error(PkStatus::Format, e.to_string()),
    };
    match fs::write(&path, bytes) {
        Ok(()) => PkStatus::Ok,
        Err(e) => set_error(PkStatus::Io, format!("writing {}: {e}", path.display())),
    }
}

/// Releases a pose handle. Null is a no-op.
///
/// # Safety
/// `pose` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_free(pose: *mut PkPose) {
    if !pose.is_null() {
        drop(unsafe { Box::from_raw(pose) });
    }
}

macro_rules! pose_getter {
    ($(#[$doc:meta])* $name:ident, $expr:expr) => {
        $(#[$doc])*
        /// Returns 0 when the handle is null.
        ///
        /// # Safety
        /// `pose` must be a live handle or null.
        #[no_mangle]
        pub unsafe extern "C" fn $name(pose: *const PkPose) -> u64 {
            match unsafe { pose_ref(pose) } {
                Ok(p) => $expr(p),
                Err(_) => 0,
            }
        }
    };
}

pose_getter!(
    /// Frame count.
    pk_pose_frames,
    |p: &Pose| p.frames() as u64
);
pose_getter!(
    /// People per frame.
    pk_pose_people,
    |p: &Pose| p.body.people() as u64
);
pose_getter!(
    /// Total keypoints per person.
    pk_pose_points,
    |p: &Pose| p.body.points() as u64
);
pose_getter!(
    /// Coordinate axes per keypoint.
    pk_pose_axes,
    |p: &Pose| p.body.axes() as u64
);
pose_getter!(
    /// Frames per second.
    pk_pose_fps,
    |p: &Pose| p.body.fps as u64
);
pose_getter!(
    /// Number of components in the header.
    pk_pose_component_count,
    |p: &Pose| p.header.components.len() as u64
);

/// Name of the component at `index`, as a fresh string. Free it with
/// [`pk_string_free`]. Null when the handle is null or the index is out of
/// range.
///
/// # Safety
/// `pose` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_component_name(pose: *const PkPose, index: usize) -> *mut c_char {
    let Ok(pose) = (unsafe { pose_ref(pose) }) else {
        return ptr::null_mut();
    };
    match pose.header.components.get(index) {
        Some(c) => CString::new(c.name.clone())
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => {
            set_error(PkStatus::InvalidArgument, format!("component index {index} out of range"));
            ptr::null_mut()
        }
    }
}

/// Keeps only the named components, in the given order.
///
/// # Safety
/// `names` must point to `count` valid NUL-terminated strings; `pose` must
/// be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_select_components(
    pose: *const PkPose,
    names: *const *const c_char,
    count: usize,
    out: *mut *mut PkPose,
) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    if names.is_null() && count > 0 {
        return set_error(PkStatus::NullPointer, "names is null");
    }
    let mut owned = Vec::with_capacity(count);
    for i in 0..count {
        let name_ptr = unsafe { *names.add(i) };
        match unsafe { cstr(name_ptr, "component name") } {
            Ok(n) => owned.push(n),
            Err(s) => return s,
        }
    }
    match pose.select_components(&owned) {
        Ok(selected) => hand_out(out, selected),
        Err(e) => set_error(PkStatus::Format, e.to_string()),
    }
}

/// Scales and recenters so the mean distance between the two named points is
/// 1 and their mean midpoint sits at the origin, per person.
///
/// # Safety
/// `pose` must be a live handle; `left`, `right` valid strings; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_normalize_shoulders(
    pose: *const PkPose,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut PkPose,
) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let (left, right) = match (unsafe { cstr(left, "left") }, unsafe { cstr(right, "right") }) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match ops::normalize_shoulders(pose, left, right) {
        Ok(p) => hand_out(out, p),
        Err(e) => set_error(PkStatus::Ops, e.to_string()),
    }
}

/// Resamples to a new frame rate by linear interpolation.
///
/// # Safety
/// `pose` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_interpolate_fps(
    pose: *const PkPose,
    new_fps: u16,
    out: *mut *mut PkPose,
) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match ops::interpolate_fps(pose, new_fps) {
        Ok(p) => hand_out(out, p),
        Err(e) => set_error(PkStatus::Ops, e.to_string()),
    }
}

/// Savitzky-Golay smoothing along time.
///
/// # Safety
/// `pose` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_savgol_smooth(
    pose: *const PkPose,
    window: usize,
    polyorder: usize,
    out: *mut *mut PkPose,
) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match ops::savgol_smooth(pose, window, polyorder) {
        Ok(p) => hand_out(out, p),
        Err(e) => set_error(PkStatus::Ops, e.to_string()),
    }
}

/// Optical flow of every point: `frames * people * points` doubles in frame-
/// major order, allocated by this library. Free with [`pk_doubles_free`].
///
/// # Safety
/// `pose` must be a live handle; `out_values` and `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_optical_flow(
    pose: *const PkPose,
    out_values: *mut *mut f64,
    out_len: *mut usize,
) -> PkStatus {
    let pose = match unsafe { pose_ref(pose) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out_values.is_null() || out_len.is_null() {
        return set_error(PkStatus::NullPointer, "out pointer is null");
    }
    let flow = ops::optical_flow(pose);
    let values = flow.values().to_vec().into_boxed_slice();
    unsafe {
        *out_len = values.len();
        *out_values = Box::into_raw(values) as *mut f64;
    }
    PkStatus::Ok
}

/// Stitches clips in order with the default configuration and the given
/// padding.
///
/// # Safety
/// `clips` must point to `count` live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_pose_stitch(
    clips: *const *const PkPose,
    count: usize,
    padding_seconds: f64,
    out: *mut *mut PkPose,
) -> PkStatus {
    if clips.is_null() {
        return set_error(PkStatus::NullPointer, "clips is null");
    }
    let mut owned = Vec::with_capacity(count);
    for i in 0..count {
        match unsafe { pose_ref(*clips.add(i)) } {
            Ok(p) => owned.push(p.clone()),
            Err(s) => return s,
        }
    }
    let config = stitch::StitchConfig { padding_seconds, ..stitch::StitchConfig::default() };
    match stitch::stitch(&owned, &config) {
        Ok(p) => hand_out(out, p),
        Err(e) => set_error(PkStatus::Stitch, e.to_string()),
    }
}

/// Tokenizes a Formal SignWriting string into space-separated tokens. Free
/// the result with [`pk_string_free`].
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_fsw_tokenize(text: *const c_char, out: *mut *mut c_char) -> PkStatus {
    let text = match unsafe { cstr(text, "text") } {
        Ok(t) => t,
        Err(s) => return s,
    };
    if out.is_null() {
        return set_error(PkStatus::NullPointer, "out pointer is null");
    }
    let signs = match fsw::parse_fsw(text) {
        Ok(s) => s,
        Err(e) => return set_error(PkStatus::Fsw, e.to_string()),
    };
    let rendered = fsw::tokenize_all(&signs).to_string();
    match CString::new(rendered) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PkStatus::Ok
        }
        Err(_) => set_error(PkStatus::Fsw, "token text contains NUL"),
    }
}

/// Renders a space-separated token stream back into FSW text. Free the
/// result with [`pk_string_free`].
///
/// # Safety
/// `tokens` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_fsw_detokenize(tokens: *const c_char, out: *mut *mut c_char) -> PkStatus {
    let tokens = match unsafe { cstr(tokens, "tokens") } {
        Ok(t) => t,
        Err(s) => return s,
    };
    if out.is_null() {
        return set_error(PkStatus::NullPointer, "out pointer is null");
    }
    let stream: fsw::FswTokenStream = match tokens.parse::<fsw::FswTokenStream>() {
        Ok(s) => s,
        Err(e) => return set_error(PkStatus::Fsw, e.to_string()),
    };
    match fsw::detokenize(&stream) {
        Ok(text) => match CString::new(text) {
            Ok(c) => {
                unsafe { *out = c.into_raw() };
                PkStatus::Ok
            }
            Err(_) => set_error(PkStatus::Fsw, "FSW text contains NUL"),
        },
        Err(e) => set_error(PkStatus::Fsw, e.to_string()),
    }
}

/// Size of the closed FSW token vocabulary (1182).
#[no_mangle]
pub extern "C" fn pk_fsw_vocabulary_size() -> usize {
    fsw::VOCABULARY_SIZE
}

/// Greedy threshold decoding of per-frame (b, i, o) probabilities (0-100
/// scale) into segments. On success `out_segments` receives an array of
/// `out_count` segments allocated by this library; free it with
/// [`pk_segments_free`].
///
/// # Safety
/// `b`, `i`, `o` must each point to `len` doubles; the out pointers must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn pk_decode_probs(
    b: *const f64,
    i: *const f64,
    o: *const f64,
    len: usize,
    threshold_b: f64,
    threshold_o: f64,
    out_segments: *mut *mut PkSegment,
    out_count: *mut usize,
) -> PkStatus {
    if (b.is_null() || i.is_null() || o.is_null()) && len > 0 {
        return set_error(PkStatus::NullPointer, "probability array is null");
    }
    if out_segments.is_null() || out_count.is_null() {
        return set_error(PkStatus::NullPointer, "out pointer is null");
    }
    if !(0.0..=100.0).contains(&threshold_b) || !(0.0..=100.0).contains(&threshold_o) {
        return set_error(PkStatus::InvalidArgument, "thresholds must be in [0, 100]");
    }
    let rows: Vec<(f64, f64, f64)> = (0..len)
        .map(|k| unsafe { (*b.add(k), *i.add(k), *o.add(k)) })
        .collect();
    let probs = match ProbSeries::new(rows) {
        Ok(p) => p,
        Err(e) => return set_error(PkStatus::Segmentation, e.to_string()),
    };
    let segments: Vec<PkSegment> = decode_probs(&probs, threshold_b, threshold_o)
        .into_iter()
        .map(|s| PkSegment { start: s.start as u64, end: s.end as u64 })
        .collect();
    unsafe {
        *out_count = segments.len();
        *out_segments = Box::into_raw(segments.into_boxed_slice()) as *mut PkSegment;
    }
    PkStatus::Ok
}

/// Frees a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Frees a double array returned by this library. Null is a no-op.
///
/// # Safety
/// `values` and `len` must come from the same successful call.
#[no_mangle]
pub unsafe extern "C" fn pk_doubles_free(values: *mut f64, len: usize) {
    if !values.is_null() {
        drop(unsafe { Box::from_raw(std::slice::from_raw_parts_mut(values, len)) });
    }
}

/// Frees a segment array returned by [`pk_decode_probs`]. Null is a no-op.
///
/// # Safety
/// `segments` and `count` must come from the same successful call.
#[no_mangle]
pub unsafe extern "C" fn pk_segments_free(segments: *mut PkSegment, count: usize) {
    if !segments.is_null() {
        drop(unsafe { Box::from_raw(std::slice::from_raw_parts_mut(segments, count)) });
    }
}
