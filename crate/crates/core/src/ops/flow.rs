//! Per-point optical flow: frame-to-frame displacement norm scaled by fps.

use crate::container::Pose;

/// Flow values per frame, person and point, in normalized-distance per
/// second. Frame 0 is zero-filled (no predecessor), and a point missing in
/// either neighboring frame contributes 0, so a point absent at frame `t`
/// zeroes both `t` and `t + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSeries {
    pub fps: u16,
    frames: usize,
    people: usize,
    points: usize,
    values: Vec<f64>,
}

impl FlowSeries {
    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn people(&self) -> usize {
        self.people
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn value(&self, frame: usize, person: usize, point: usize) -> f64 {
        self.values[(frame * self.people + person) * self.points + point]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum over people and points for one frame.
    pub fn frame_total(&self, frame: usize) -> f64 {
        let stride = self.people * self.points;
        self.values[frame * stride..(frame + 1) * stride].iter().sum()
    }
}

/// Computes the flow series of a pose: `||P_t - P_{t-1}||_2 * fps` per point,
/// for frames where the point is present in both `t - 1` and `t`, else 0.
pub fn optical_flow(pose: &Pose) -> FlowSeries {
    let body = &pose.body;
    let people = body.people() as usize;
    let points = body.points();
    let axes = body.axes();
    let fps = body.fps;
    let mut values = vec![0.0f64; body.frames() * people * points];

    for f in 1..body.frames() {
        for p in 0..people {
            for pt in 0..points {
                if !body.is_present(f - 1, p, pt) || !body.is_present(f, p, pt) {
                    continue;
                }
                let prev = body.coords(f - 1, p, pt);
                let cur = body.coords(f, p, pt);
                let mut sq = 0.0f64;
                for a in 0..axes {
                    let d = cur[a] as f64 - prev[a] as f64;
                    sq += d * d;
                }
                values[(f * people + p) * points + pt] = sq.sqrt() * fps as f64;
            }
        }
    }

    FlowSeries { fps, frames: body.frames(), people, points, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{ComponentSpec, Pose, PoseBody, PoseHeader};

    fn single_point_pose(fps: u16, xs: &[f32], present: &[bool]) -> Pose {
        let header = PoseHeader::new(vec![ComponentSpec::new("P", "XYC", vec!["a".into()])]);
        let mut body = PoseBody::zeroed(fps, 1, xs.len(), 1, 2).unwrap();
        for (f, &x) in xs.iter().enumerate() {
            body.coords_mut(f, 0, 0)[0] = x;
            body.set_conf(f, 0, 0, if present[f] { 1.0 } else { 0.0 });
        }
        Pose::new(header, body).unwrap()
    }

    #[test]
    fn static_pose_has_zero_flow() {
        let pose = single_point_pose(25, &[3.0; 6], &[true; 6]);
        let flow = optical_flow(&pose);
        assert!(flow.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_velocity_yields_constant_flow() {
        // 2 units per frame at 25 fps -> 50 units per second.
        let xs: Vec<f32> = (0..8).map(|f| 2.0 * f as f32).collect();
        let pose = single_point_pose(25, &xs, &[true; 8]);
        let flow = optical_flow(&pose);
        assert_eq!(flow.value(0, 0, 0), 0.0);
        for f in 1..8 {
            assert!((flow.value(f, 0, 0) - 50.0).abs() < 1e-9);
        }
    }

    #[test]
    fn missing_point_zeroes_current_and_next_frame() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let present = [true, true, false, true, true, true];
        let pose = single_point_pose(10, &xs, &present);
        let flow = optical_flow(&pose);
        let got: Vec<f64> = (0..6).map(|f| flow.value(f, 0, 0)).collect();
        // Absent at t=2 zeroes t=2 and t=3; everything else moves 1/frame.
        assert_eq!(got, vec![0.0, 10.0, 0.0, 0.0, 10.0, 10.0]);
    }

    #[test]
    fn flow_is_frame_rate_invariant_for_straight_lines() {
        // x(t) = 3 t, sampled at 25 and 50 fps over one second.
        let xs25: Vec<f32> = (0..26).map(|f| 3.0 * f as f32 / 25.0).collect();
        let xs50: Vec<f32> = (0..51).map(|f| 3.0 * f as f32 / 50.0).collect();
        let f25 = optical_flow(&single_point_pose(25, &xs25, &vec![true; 26]));
        let f50 = optical_flow(&single_point_pose(50, &xs50, &vec![true; 51]));
        for f in 1..26 {
            assert!((f25.value(f, 0, 0) - 3.0).abs() < 1e-5);
        }
        for f in 1..51 {
            assert!((f50.value(f, 0, 0) - 3.0).abs() < 1e-5);
        }
    }
}
