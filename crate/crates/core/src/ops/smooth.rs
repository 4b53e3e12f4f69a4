//! Savitzky-Golay smoothing along the time axis.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::container::Pose;

use super::OpsError;

/// Smooths each coordinate channel of each point with a Savitzky-Golay
/// filter of the given window and polynomial order. Filtering runs
/// independently over every maximal run of frames in which the point is
/// present, so windows never mix real samples with missing ones; confidences
/// are untouched. Near run boundaries the window is truncated to the run and
/// widened to keep the least-squares fit overdetermined.
pub fn savgol_smooth(pose: &Pose, window: usize, polyorder: usize) -> Result<Pose, OpsError> {
    if window % 2 == 0 {
        return Err(OpsError::BadWindow(format!("window {window} is even")));
    }
    if window <= polyorder {
        return Err(OpsError::BadWindow(format!(
            "window {window} must exceed polyorder {polyorder}"
        )));
    }
    if window > pose.frames() {
        return Err(OpsError::BadWindow(format!(
            "window {window} exceeds frame count {}",
            pose.frames()
        )));
    }

    let body = &pose.body;
    let axes = body.axes();
    let mut out = pose.clone();
    let mut filter = SavgolFilter::new(window, polyorder);

    let mut series = Vec::with_capacity(body.frames());
    for p in 0..body.people() as usize {
        for pt in 0..body.points() {
            // Maximal runs of presence.
            let mut f = 0;
            while f < body.frames() {
                if !body.is_present(f, p, pt) {
                    f += 1;
                    continue;
                }
                let start = f;
                while f < body.frames() && body.is_present(f, p, pt) {
                    f += 1;
                }
                let run = start..f;
                for axis in 0..axes {
                    series.clear();
                    series.extend(run.clone().map(|i| body.coords(i, p, pt)[axis] as f64));
                    let smoothed = filter.apply(&series);
                    for (i, v) in run.clone().zip(smoothed) {
                        out.body.coords_mut(i, p, pt)[axis] = v as f32;
                    }
                }
            }
        }
    }

    Ok(out)
}

/// Least-squares polynomial smoother. Weight vectors depend only on the
/// window offsets relative to the evaluation position, so they are cached
/// across points and series.
pub(crate) struct SavgolFilter {
    window: usize,
    polyorder: usize,
    weights: HashMap<(i64, i64), Vec<f64>>,
}

impl SavgolFilter {
    pub(crate) fn new(window: usize, polyorder: usize) -> Self {
        Self { window, polyorder, weights: HashMap::new() }
    }

    pub(crate) fn apply(&mut self, series: &[f64]) -> Vec<f64> {
        let n = series.len();
        if n == 0 {
            return Vec::new();
        }
        let half = (self.window / 2) as i64;
        // Keep the fit overdetermined where possible.
        let min_size = (self.polyorder + 2).min(n);

        (0..n)
            .map(|i| {
                let mut lo = (i as i64 - half).max(0);
                let mut hi = (i as i64 + half).min(n as i64 - 1);
                while (hi - lo + 1) < min_size as i64 {
                    if lo > 0 {
                        lo -= 1;
                    } else {
                        hi += 1;
                    }
                }
                let weights = self.weights_for(lo - i as i64, hi - i as i64);
                weights
                    .iter()
                    .zip(&series[lo as usize..=hi as usize])
                    .map(|(w, x)| w * x)
                    .sum()
            })
            .collect()
    }

    /// Weights evaluating the least-squares polynomial at offset 0 for
    /// samples at offsets `lo..=hi`.
    fn weights_for(&mut self, lo: i64, hi: i64) -> &Vec<f64> {
        let polyorder = self.polyorder;
        self.weights.entry((lo, hi)).or_insert_with(|| {
            let m = (hi - lo + 1) as usize;
            let degree = polyorder.min(m - 1);
            // Vandermonde in the offset variable; evaluation point is 0,
            // so the smoothed value is the fitted constant coefficient.
            let a = DMatrix::from_fn(m, degree + 1, |r, c| ((lo + r as i64) as f64).powi(c as i32));
            let ata = a.transpose() * &a;
            let mut e0 = nalgebra::DVector::zeros(degree + 1);
            e0[0] = 1.0;
            let z = ata
                .lu()
                .solve(&e0)
                .expect("normal equations of a Vandermonde basis are invertible");
            (a * z).iter().copied().collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{ComponentSpec, Pose, PoseBody, PoseHeader};

    fn series_pose(values: &[f64], present: Option<&[bool]>) -> Pose {
        let header = PoseHeader::new(vec![ComponentSpec::new("P", "XYC", vec!["a".into()])]);
        let mut body = PoseBody::zeroed(25, 1, values.len(), 1, 2).unwrap();
        for (f, &v) in values.iter().enumerate() {
            body.coords_mut(f, 0, 0)[0] = v as f32;
            let here = present.map_or(true, |p| p[f]);
            body.set_conf(f, 0, 0, if here { 0.8 } else { 0.0 });
        }
        Pose::new(header, body).unwrap()
    }

    #[test]
    fn quadratic_trajectories_pass_through_unchanged() {
        let values: Vec<f64> = (0..40)
            .map(|f| {
                let t = f as f64 / 40.0;
                0.3 + 1.2 * t - 0.8 * t * t
            })
            .collect();
        let pose = series_pose(&values, None);
        let out = savgol_smooth(&pose, 7, 2).unwrap();
        for f in 0..40 {
            let got = out.body.coords(f, 0, 0)[0] as f64;
            assert!((got - values[f]).abs() < 1e-6, "frame {f}: {got} vs {}", values[f]);
        }
    }

    #[test]
    fn alternating_noise_is_attenuated() {
        let values: Vec<f64> = (0..30).map(|f| if f % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let pose = series_pose(&values, None);
        let out = savgol_smooth(&pose, 5, 2).unwrap();
        let max_out = (0..30)
            .map(|f| (out.body.coords(f, 0, 0)[0] as f64).abs())
            .fold(0.0f64, f64::max);
        assert!(max_out < 1.0, "max |out| = {max_out}");
    }

    #[test]
    fn window_larger_than_clip_is_rejected() {
        let pose = series_pose(&[0.0, 1.0, 2.0], None);
        assert!(matches!(savgol_smooth(&pose, 5, 2), Err(OpsError::BadWindow(_))));
        assert!(matches!(savgol_smooth(&pose, 2, 1), Err(OpsError::BadWindow(_))));
        assert!(matches!(savgol_smooth(&pose, 3, 3), Err(OpsError::BadWindow(_))));
    }

    #[test]
    fn missing_frames_split_the_series_into_runs() {
        // A spike hidden behind a missing frame must not bleed into the
        // neighboring run.
        let values = vec![1.0, 1.0, 1.0, 100.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0];
        let present = vec![true, true, true, false, true, true, true, true, true, true];
        let pose = series_pose(&values, Some(&present));
        let out = savgol_smooth(&pose, 3, 1).unwrap();
        // First run is constant 1, second constant 2; both are preserved.
        for f in 0..3 {
            assert!((out.body.coords(f, 0, 0)[0] - 1.0).abs() < 1e-6);
        }
        for f in 4..10 {
            assert!((out.body.coords(f, 0, 0)[0] - 2.0).abs() < 1e-6);
        }
        // The missing frame's coordinates are untouched.
        assert_eq!(out.body.coords(3, 0, 0)[0], 100.0);
        assert_eq!(out.body.conf(3, 0, 0), 0.0);
    }

    #[test]
    fn confidences_are_untouched() {
        let values: Vec<f64> = (0..12).map(|f| (f as f64).sin()).collect();
        let pose = series_pose(&values, None);
        let out = savgol_smooth(&pose, 5, 2).unwrap();
        assert_eq!(out.body.confidences(), pose.body.confidences());
    }
}
