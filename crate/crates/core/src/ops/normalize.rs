//! Shoulder normalization and 3-D plane alignment.

use nalgebra::{Rotation3, Unit, Vector3};

use crate::container::Pose;

use super::OpsError;

/// Scales and recenters each person so that, over the frames where both named
/// points are present, their mean distance is 1 and the mean of their
/// midpoints sits at the origin. One global scale + translation per person;
/// confidences are untouched. A person with no frame where both points are
/// present is left unchanged.
pub fn normalize_shoulders(pose: &Pose, left: &str, right: &str) -> Result<Pose, OpsError> {
    let (_, li) = pose
        .header
        .find_point(left)
        .ok_or_else(|| OpsError::MissingPoint(left.to_string()))?;
    let (_, ri) = pose
        .header
        .find_point(right)
        .ok_or_else(|| OpsError::MissingPoint(right.to_string()))?;

    let body = &pose.body;
    let axes = body.axes();
    let mut out = pose.clone();

    for person in 0..body.people() as usize {
        let mut count = 0usize;
        let mut dist_sum = 0.0f64;
        let mut mid_sum = vec![0.0f64; axes];
        for f in 0..body.frames() {
            if !body.is_present(f, person, li) || !body.is_present(f, person, ri) {
                continue;
            }
            let l = body.coords(f, person, li);
            let r = body.coords(f, person, ri);
            let mut sq = 0.0f64;
            for a in 0..axes {
                let d = l[a] as f64 - r[a] as f64;
                sq += d * d;
                mid_sum[a] += (l[a] as f64 + r[a] as f64) / 2.0;
            }
            dist_sum += sq.sqrt();
            count += 1;
        }
        if count == 0 {
            continue;
        }
        let mean_dist = dist_sum / count as f64;
        if mean_dist < 1e-9 {
            return Err(OpsError::DegenerateSkeleton);
        }
        let scale = 1.0 / mean_dist;
        let center: Vec<f64> = mid_sum.iter().map(|s| s / count as f64).collect();

        for f in 0..body.frames() {
            for pt in 0..body.points() {
                let c = out.body.coords_mut(f, person, pt);
                for a in 0..axes {
                    c[a] = ((c[a] as f64 - center[a]) * scale) as f32;
                }
            }
        }
    }

    Ok(out)
}

/// Rotates each frame (per person) so that the plane through the three named
/// points has its normal `(b-a) x (c-a)` along +Z. Frames where any of the
/// three points is missing, or where they are collinear, are left unrotated;
/// if every frame is degenerate the whole call fails.
pub fn normalize_plane(pose: &Pose, a: &str, b: &str, c: &str) -> Result<Pose, OpsError> {
    if pose.body.axes() < 3 {
        return Err(OpsError::NotThreeD);
    }
    let (_, ai) = pose
        .header
        .find_point(a)
        .ok_or_else(|| OpsError::MissingPoint(a.to_string()))?;
    let (_, bi) = pose
        .header
        .find_point(b)
        .ok_or_else(|| OpsError::MissingPoint(b.to_string()))?;
    let (_, ci) = pose
        .header
        .find_point(c)
        .ok_or_else(|| OpsError::MissingPoint(c.to_string()))?;

    let body = &pose.body;
    let mut out = pose.clone();
    let mut rotated_any = false;

    let point3 = |f: usize, p: usize, pt: usize| {
        let c = body.coords(f, p, pt);
        Vector3::new(c[0] as f64, c[1] as f64, c[2] as f64)
    };

    for f in 0..body.frames() {
        for person in 0..body.people() as usize {
            if !body.is_present(f, person, ai)
                || !body.is_present(f, person, bi)
                || !body.is_present(f, person, ci)
            {
                continue;
            }
            let pa = point3(f, person, ai);
            let normal = (point3(f, person, bi) - pa).cross(&(point3(f, person, ci) - pa));
            if normal.norm() < 1e-12 {
                continue;
            }
            let rotation = rotation_to_z(&normal);
            rotated_any = true;
            for pt in 0..body.points() {
                let coords = out.body.coords_mut(f, person, pt);
                let v = rotation * Vector3::new(coords[0] as f64, coords[1] as f64, coords[2] as f64);
                coords[0] = v.x as f32;
                coords[1] = v.y as f32;
                coords[2] = v.z as f32;
            }
        }
    }

    if !rotated_any && body.frames() > 0 {
        return Err(OpsError::CollinearPoints);
    }
    Ok(out)
}

/// Minimal rotation taking `v` to the +Z axis.
pub(crate) fn rotation_to_z(v: &Vector3<f64>) -> Rotation3<f64> {
    let z = Vector3::z_axis();
    match Rotation3::rotation_between(v, &z) {
        Some(r) => r,
        // Anti-parallel: flip about X.
        None => Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::x()), std::f64::consts::PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{ComponentSpec, PoseBody, PoseHeader};

    fn skeleton(axes: usize) -> PoseHeader {
        let format = if axes == 2 { "XYC" } else { "XYZC" };
        PoseHeader::new(vec![ComponentSpec::new(
            "BODY",
            format,
            vec!["L".into(), "R".into(), "X".into()],
        )])
    }

    fn pose_from(frames: usize, people: u16, axes: usize, fill: impl Fn(usize, usize, usize) -> (Vec<f32>, f32)) -> Pose {
        let header = skeleton(axes);
        let mut body = PoseBody::zeroed(25, people, frames, 3, axes).unwrap();
        for f in 0..frames {
            for p in 0..people as usize {
                for pt in 0..3 {
                    let (coords, conf) = fill(f, p, pt);
                    body.coords_mut(f, p, pt).copy_from_slice(&coords);
                    body.set_conf(f, p, pt, conf);
                }
            }
        }
        Pose::new(header, body).unwrap()
    }

    fn shoulder_stats(pose: &Pose, person: usize) -> (f64, [f64; 2]) {
        let mut dist = 0.0;
        let mut mid = [0.0f64; 2];
        let mut n = 0;
        for f in 0..pose.frames() {
            let l = pose.body.coords(f, person, 0);
            let r = pose.body.coords(f, person, 1);
            dist += (((l[0] - r[0]).powi(2) + (l[1] - r[1]).powi(2)) as f64).sqrt();
            mid[0] += (l[0] + r[0]) as f64 / 2.0;
            mid[1] += (l[1] + r[1]) as f64 / 2.0;
            n += 1;
        }
        (dist / n as f64, [mid[0] / n as f64, mid[1] / n as f64])
    }

    #[test]
    fn scales_constant_shoulder_distance_to_one() {
        // Two frames, shoulders 250 px apart, center at (225, 100).
        let pose = pose_from(2, 1, 2, |f, _, pt| {
            let y = 100.0 + f as f32;
            match pt {
                0 => (vec![100.0, y], 1.0),
                1 => (vec![350.0, y], 1.0),
                _ => (vec![225.0, y + 50.0], 1.0),
            }
        });
        let norm = normalize_shoulders(&pose, "L", "R").unwrap();
        let (dist, mid) = shoulder_stats(&norm, 0);
        assert!((dist - 1.0).abs() < 1e-6);
        assert!(mid[0].abs() < 1e-6 && mid[1].abs() < 1e-6);
        // Pure scale by 1/250: the third point keeps its relative offset.
        let x = norm.body.coords(0, 0, 2);
        assert!((x[1] as f64 - 49.5 / 250.0).abs() < 1e-6);
        // Confidences untouched.
        assert_eq!(norm.body.conf(1, 0, 2), 1.0);
    }

    #[test]
    fn already_normalized_pose_is_a_fixed_point() {
        let pose = pose_from(2, 1, 2, |_, _, pt| match pt {
            0 => (vec![-0.5, 0.0], 1.0),
            1 => (vec![0.5, 0.0], 1.0),
            _ => (vec![0.0, 0.7], 1.0),
        });
        let norm = normalize_shoulders(&pose, "L", "R").unwrap();
        for (a, b) in norm.body.data().iter().zip(pose.body.data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn per_person_normalization_is_independent() {
        // Person 0 has spacing 2, person 1 spacing 8 with an offset center.
        let pose = pose_from(2, 2, 2, |_, p, pt| {
            let (cx, half) = if p == 0 { (0.0, 1.0) } else { (100.0, 4.0) };
            match pt {
                0 => (vec![cx - half, 10.0], 1.0),
                1 => (vec![cx + half, 10.0], 1.0),
                _ => (vec![cx, 20.0], 1.0),
            }
        });
        let norm = normalize_shoulders(&pose, "L", "R").unwrap();
        for person in 0..2 {
            let (dist, mid) = shoulder_stats(&norm, person);
            assert!((dist - 1.0).abs() < 1e-6, "person {person}");
            assert!(mid[0].abs() < 1e-6 && mid[1].abs() < 1e-6, "person {person}");
        }
        // The third point of person 1 normalized by person 1's own scale.
        let x = norm.body.coords(0, 1, 2);
        assert!((x[1] as f64 - 10.0 / 8.0).abs() < 1e-6);
    }

    #[test]
    fn missing_named_point_errors() {
        let pose = pose_from(1, 1, 2, |_, _, _| (vec![0.0, 0.0], 1.0));
        assert!(matches!(
            normalize_shoulders(&pose, "L", "nope"),
            Err(OpsError::MissingPoint(_))
        ));
    }

    #[test]
    fn degenerate_shoulders_error() {
        let pose = pose_from(2, 1, 2, |_, _, _| (vec![5.0, 5.0], 1.0));
        assert!(matches!(
            normalize_shoulders(&pose, "L", "R"),
            Err(OpsError::DegenerateSkeleton)
        ));
    }

    #[test]
    fn plane_requires_three_axes() {
        let pose = pose_from(1, 1, 2, |_, _, _| (vec![0.0, 0.0], 1.0));
        assert!(matches!(normalize_plane(&pose, "L", "R", "X"), Err(OpsError::NotThreeD)));
    }

    #[test]
    fn plane_already_aligned_is_identity() {
        let pose = pose_from(1, 1, 3, |_, _, pt| match pt {
            0 => (vec![0.0, 0.0, 2.0], 1.0),
            1 => (vec![1.0, 0.0, 2.0], 1.0),
            _ => (vec![0.0, 1.0, 2.0], 1.0),
        });
        let out = normalize_plane(&pose, "L", "R", "X").unwrap();
        for (a, b) in out.body.data().iter().zip(pose.body.data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn tilted_plane_is_brought_to_xy() {
        // Plane spanned by X and Z axes: normal along -Y, i.e. tilted 90
        // degrees about X relative to the XY plane.
        let pose = pose_from(1, 1, 3, |_, _, pt| match pt {
            0 => (vec![0.0, 5.0, 0.0], 1.0),
            1 => (vec![1.0, 5.0, 0.0], 1.0),
            _ => (vec![0.0, 5.0, 1.0], 1.0),
        });
        let out = normalize_plane(&pose, "L", "R", "X").unwrap();
        let a = out.body.coords(0, 0, 0);
        let b = out.body.coords(0, 0, 1);
        let c = out.body.coords(0, 0, 2);
        let pa = Vector3::new(a[0] as f64, a[1] as f64, a[2] as f64);
        let pb = Vector3::new(b[0] as f64, b[1] as f64, b[2] as f64);
        let pc = Vector3::new(c[0] as f64, c[1] as f64, c[2] as f64);
        let normal = (pb - pa).cross(&(pc - pa)).normalize();
        assert!(normal.dot(&Vector3::z()) >= 1.0 - 1e-6);
    }

    #[test]
    fn all_frames_collinear_errors() {
        let pose = pose_from(2, 1, 3, |_, _, pt| (vec![pt as f32, 0.0, 0.0], 1.0));
        assert!(matches!(
            normalize_plane(&pose, "L", "R", "X"),
            Err(OpsError::CollinearPoints)
        ));
    }
}
