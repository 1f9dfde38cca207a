//! Lane-attached coordinate frame: conversion between Cartesian positions and
//! (s, l) coordinates along a polyline reference lane.
//!
//! The lane tangent is interpolated linearly between per-vertex directions so
//! that the frame is continuous across polyline vertices; `to_frenet` solves
//! the orthogonality condition against that same tangent field, which makes
//! the two conversions inverse of each other to well below the 1e-6 m
//! round-trip budget on smoothly sampled lanes.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FrenetError {
    #[error("invalid reference lane: {0}")]
    InvalidLane(String),
    #[error("point is {dist:.3} m from the lane, beyond the {radius:.3} m capture radius")]
    OutOfCaptureRange { dist: f64, radius: f64 },
    #[error("arc length {s:.3} outside [0, {length:.3}]")]
    OutOfRange { s: f64, length: f64 },
}

/// Ego state in the lane frame at a point in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetState {
    pub s: f64,
    pub l: f64,
    pub t: f64,
    pub s_dot: f64,
    pub l_dot: f64,
    pub s_ddot: f64,
    pub l_ddot: f64,
}

impl FrenetState {
    pub fn at_rest(s: f64, l: f64, t: f64) -> Self {
        Self {
            s,
            l,
            t,
            s_dot: 0.0,
            l_dot: 0.0,
            s_ddot: 0.0,
            l_ddot: 0.0,
        }
    }

    pub fn is_valid(&self) -> bool {
        let fields = [
            self.s,
            self.l,
            self.t,
            self.s_dot,
            self.l_dot,
            self.s_ddot,
            self.l_ddot,
        ];
        self.t >= 0.0 && fields.iter().all(|v| v.is_finite())
    }
}

/// Arc-length-parameterized polyline centerline.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceLane {
    points: Vec<[f64; 2]>,
    cum_arclength: Vec<f64>,
    /// Unit tangent assigned to each vertex: segment direction at the ends,
    /// normalized average of adjacent segment directions in the interior.
    vertex_tangents: Vec<[f64; 2]>,
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = norm(v);
    [v[0] / n, v[1] / n]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// z-component of the 2-D cross product; positive when `b` points to the left
/// of `a`.
fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl ReferenceLane {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self, FrenetError> {
        if points.len() < 2 {
            return Err(FrenetError::InvalidLane(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        let mut cum = Vec::with_capacity(points.len());
        cum.push(0.0);
        for (i, pair) in points.windows(2).enumerate() {
            let d = norm(sub(pair[1], pair[0]));
            if d <= 0.0 {
                return Err(FrenetError::InvalidLane(format!(
                    "points {} and {} coincide",
                    i,
                    i + 1
                )));
            }
            cum.push(cum[i] + d);
        }
        let dirs: Vec<[f64; 2]> = points
            .windows(2)
            .map(|pair| normalize(sub(pair[1], pair[0])))
            .collect();
        let mut vertex_tangents = Vec::with_capacity(points.len());
        vertex_tangents.push(dirs[0]);
        for i in 1..points.len() - 1 {
            let avg = [dirs[i - 1][0] + dirs[i][0], dirs[i - 1][1] + dirs[i][1]];
            if norm(avg) < 1e-12 {
                return Err(FrenetError::InvalidLane(format!(
                    "lane reverses direction at vertex {i}"
                )));
            }
            vertex_tangents.push(normalize(avg));
        }
        vertex_tangents.push(*dirs.last().unwrap());
        Ok(Self {
            points,
            cum_arclength: cum,
            vertex_tangents,
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn cum_arclength(&self) -> &[f64] {
        &self.cum_arclength
    }

    pub fn total_length(&self) -> f64 {
        *self.cum_arclength.last().unwrap()
    }

    /// Centerline position at arc length `s` (piecewise linear).
    fn position_at(&self, seg: usize, tau: f64) -> [f64; 2] {
        let a = self.points[seg];
        let b = self.points[seg + 1];
        [a[0] + tau * (b[0] - a[0]), a[1] + tau * (b[1] - a[1])]
    }

    /// Interpolated unit tangent within segment `seg` at fraction `tau`.
    fn tangent_at(&self, seg: usize, tau: f64) -> [f64; 2] {
        let ta = self.vertex_tangents[seg];
        let tb = self.vertex_tangents[seg + 1];
        normalize([
            ta[0] + tau * (tb[0] - ta[0]),
            ta[1] + tau * (tb[1] - ta[1]),
        ])
    }

    fn segment_index_for(&self, s: f64) -> usize {
        // Last segment whose start is <= s.
        match self
            .cum_arclength
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(self.points.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.points.len() - 2),
        }
    }

    /// Project a Cartesian point to (s, l). `l` is positive to the lane's
    /// left. Fails when the perpendicular distance exceeds `capture_radius`.
    pub fn to_frenet(
        &self,
        point: [f64; 2],
        capture_radius: f64,
    ) -> Result<(f64, f64), FrenetError> {
        // Cheap pass: nearest point by plain segment projection.
        let mut best = (f64::INFINITY, 0usize);
        for seg in 0..self.points.len() - 1 {
            let a = self.points[seg];
            let b = self.points[seg + 1];
            let ab = sub(b, a);
            let len2 = dot(ab, ab);
            let tau = (dot(sub(point, a), ab) / len2).clamp(0.0, 1.0);
            let foot = [a[0] + tau * ab[0], a[1] + tau * ab[1]];
            let d = norm(sub(point, foot));
            if d < best.0 - 1e-12 {
                best = (d, seg);
            }
        }
        // Refine on the nearest segments with the interpolated-tangent
        // orthogonality condition so that to_cartesian inverts exactly.
        let lo = best.1.saturating_sub(2);
        let hi = (best.1 + 2).min(self.points.len() - 2);
        let mut result: Option<(f64, f64, f64)> = None; // (dist, s, l)
        for seg in lo..=hi {
            if let Some((tau, foot)) = self.orthogonal_foot(seg, point) {
                let t = self.tangent_at(seg, tau);
                let offset = sub(point, foot);
                let l = cross(t, offset).signum() * norm(offset);
                let seg_len = self.cum_arclength[seg + 1] - self.cum_arclength[seg];
                let s = self.cum_arclength[seg] + tau * seg_len;
                let d = norm(offset);
                let better = match result {
                    None => true,
                    Some((bd, bs, _)) => d < bd - 1e-12 || (d < bd + 1e-12 && s < bs),
                };
                if better {
                    result = Some((d, s, l));
                }
            }
        }
        let (dist, s, l) = result.expect("clamped orthogonal projection always yields a root");
        if dist > capture_radius {
            return Err(FrenetError::OutOfCaptureRange {
                dist,
                radius: capture_radius,
            });
        }
        Ok((s, l))
    }

    /// Root of g(tau) = (point - c(tau)) . t(tau) on segment `seg`, clamped
    /// to the segment. Ends of the lane accept the clamped endpoint root.
    fn orthogonal_foot(&self, seg: usize, point: [f64; 2]) -> Option<(f64, [f64; 2])> {
        let g = |tau: f64| {
            let foot = self.position_at(seg, tau);
            dot(sub(point, foot), self.tangent_at(seg, tau))
        };
        let (g0, g1) = (g(0.0), g(1.0));
        let last_seg = seg == self.points.len() - 2;
        let tau = if g0 <= 0.0 && seg == 0 {
            0.0
        } else if g1 >= 0.0 && last_seg {
            1.0
        } else if g0 >= 0.0 && g1 <= 0.0 {
            // g decreases through zero for points closer than the local
            // curvature radius; bisect.
            let (mut a, mut b) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if g(mid) >= 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        } else {
            return None;
        };
        Some((tau, self.position_at(seg, tau)))
    }

    /// Inverse mapping: centerline point at arc length `s`, offset `l` along
    /// the left-hand interpolated normal.
    pub fn to_cartesian(&self, s: f64, l: f64) -> Result<[f64; 2], FrenetError> {
        let length = self.total_length();
        if s < -1e-9 || s > length + 1e-9 {
            return Err(FrenetError::OutOfRange { s, length });
        }
        let s = s.clamp(0.0, length);
        let seg = self.segment_index_for(s);
        let seg_len = self.cum_arclength[seg + 1] - self.cum_arclength[seg];
        let tau = ((s - self.cum_arclength[seg]) / seg_len).clamp(0.0, 1.0);
        let foot = self.position_at(seg, tau);
        let t = self.tangent_at(seg, tau);
        let left = [-t[1], t[0]];
        Ok([foot[0] + l * left[0], foot[1] + l * left[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const CAPTURE: f64 = 20.0;

    fn straight_lane() -> ReferenceLane {
        ReferenceLane::new(vec![[0.0, 0.0], [100.0, 0.0]]).unwrap()
    }

    fn quarter_circle_lane() -> ReferenceLane {
        // Radius 10 centered at the origin, from (10, 0) counterclockwise.
        let step = 1e-4;
        let n = (PI / 2.0 / step).ceil() as usize;
        let pts: Vec<[f64; 2]> = (0..=n)
            .map(|i| {
                let theta = (PI / 2.0) * i as f64 / n as f64;
                [10.0 * theta.cos(), 10.0 * theta.sin()]
            })
            .collect();
        ReferenceLane::new(pts).unwrap()
    }

    #[test]
    fn lane_validation() {
        assert!(ReferenceLane::new(vec![[0.0, 0.0]]).is_err());
        assert!(ReferenceLane::new(vec![[0.0, 0.0], [0.0, 0.0]]).is_err());
        let lane = straight_lane();
        assert_eq!(lane.cum_arclength(), &[0.0, 100.0]);
    }

    #[test]
    fn cum_arclength_consistent_with_distances() {
        let lane = quarter_circle_lane();
        for (i, pair) in lane.points().windows(2).enumerate() {
            let d = ((pair[1][0] - pair[0][0]).powi(2) + (pair[1][1] - pair[0][1]).powi(2)).sqrt();
            let dc = lane.cum_arclength()[i + 1] - lane.cum_arclength()[i];
            assert_abs_diff_eq!(d, dc, epsilon = 1e-9);
        }
    }

    #[test]
    fn straight_lane_projection() {
        let lane = straight_lane();
        let (s, l) = lane.to_frenet([3.0, 1.0], CAPTURE).unwrap();
        assert_abs_diff_eq!(s, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn lane_start_is_identity() {
        let lane = straight_lane();
        let (s, l) = lane.to_frenet([0.0, 0.0], CAPTURE).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quarter_circle_end_projection() {
        // (0, 11) sits 1 m outside the arc at its end: s = 5*pi, and the
        // outside of a counterclockwise arc is the right-hand side, so l = -1
        // under the left-positive convention. Cross-checked below against a
        // brute-force nearest-point search.
        let lane = quarter_circle_lane();
        let (s, l) = lane.to_frenet([0.0, 11.0], CAPTURE).unwrap();
        assert_abs_diff_eq!(s, 5.0 * PI, epsilon = 1e-5);
        assert_abs_diff_eq!(l, -1.0, epsilon = 1e-5);

        let (s_in, l_in) = lane.to_frenet([0.0, 9.0], CAPTURE).unwrap();
        assert_abs_diff_eq!(s_in, 5.0 * PI, epsilon = 1e-3);
        assert_abs_diff_eq!(l_in, 1.0, epsilon = 1e-5);

        // Brute-force oracle: scan the discretized arc for the closest point.
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=200_000 {
            let theta = (PI / 2.0) * i as f64 / 200_000.0;
            let p = [10.0 * theta.cos(), 10.0 * theta.sin()];
            let d = ((p[0]) * (p[0]) + (p[1] - 11.0) * (p[1] - 11.0)).sqrt();
            if d < best.0 {
                best = (d, 10.0 * theta);
            }
        }
        assert_abs_diff_eq!(best.1, s, epsilon = 1e-3);
        assert_abs_diff_eq!(best.0, l.abs(), epsilon = 1e-6);
    }

    #[test]
    fn capture_radius_enforced() {
        let lane = straight_lane();
        let err = lane.to_frenet([50.0, 25.0], CAPTURE).unwrap_err();
        assert!(matches!(err, FrenetError::OutOfCaptureRange { .. }));
    }

    #[test]
    fn to_cartesian_basics() {
        let lane = straight_lane();
        let p = lane.to_cartesian(3.0, 1.0).unwrap();
        assert_abs_diff_eq!(p[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 1.0, epsilon = 1e-12);
        let p0 = lane.to_cartesian(0.0, 0.0).unwrap();
        assert_eq!(p0, [0.0, 0.0]);
        assert!(lane.to_cartesian(150.0, 0.0).is_err());
        assert!(lane.to_cartesian(-1.0, 0.0).is_err());
    }

    #[test]
    fn round_trip_on_smooth_lane() {
        // Gentle arc with curvature radius 200 > capture radius.
        let n = 400;
        let pts: Vec<[f64; 2]> = (0..=n)
            .map(|i| {
                let theta = 0.5 * i as f64 / n as f64; // 100 m of arc
                [200.0 * theta.sin(), 200.0 * (1.0 - theta.cos())]
            })
            .collect();
        let lane = ReferenceLane::new(pts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 1000 {
            let s = rng.random_range(1.0..lane.total_length() - 1.0);
            let l = rng.random_range(-CAPTURE * 0.9..CAPTURE * 0.9);
            let p = lane.to_cartesian(s, l).unwrap();
            let Ok((s2, l2)) = lane.to_frenet(p, CAPTURE) else {
                continue;
            };
            let p2 = lane.to_cartesian(s2, l2).unwrap();
            let err = ((p2[0] - p[0]).powi(2) + (p2[1] - p[1]).powi(2)).sqrt();
            assert!(err < 1e-6, "round trip error {err} at s={s} l={l}");
            checked += 1;
        }
    }

    #[test]
    fn projection_is_deterministic() {
        let lane = quarter_circle_lane();
        let a = lane.to_frenet([5.0, 5.0], CAPTURE).unwrap();
        let b = lane.to_frenet([5.0, 5.0], CAPTURE).unwrap();
        assert_eq!(a, b);
    }
}
