use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{ElasticaError, Result};
use crate::geometry::{BoundaryCurve, Point};

/// Rigid motion and parameter shift that put a probed pair `(t1, t1 + ε)` at `(0, ε)` with
/// `γ(0)` on the positive x-axis, `γ(ε)` on the positive y-axis and `γ′(0) = (0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalFrame {
    /// Row-major 2×2 rotation.
    pub rotation: [[f64; 2]; 2],
    pub translation: [f64; 2],
    pub t1_shift: f64,
    pub eps: f64,
}

impl CanonicalFrame {
    pub fn rotation_matrix(&self) -> Matrix2<f64> {
        let r = self.rotation;
        Matrix2::new(r[0][0], r[0][1], r[1][0], r[1][1])
    }

    /// Maps a point of the original curve into the frame.
    pub fn apply(&self, x: Point) -> Point {
        self.rotation_matrix() * x + Point::new(self.translation[0], self.translation[1])
    }
}

/// Tolerance on the frame post-conditions, relative to the curve length.
pub const FRAME_TOL: f64 = 1e-8;

/// Builds the canonical frame for the probed pair `(t1, t2)` and returns the transformed,
/// re-parameterised curve.
pub fn canonical_frame(curve: &BoundaryCurve, t1: f64, t2: f64) -> Result<(CanonicalFrame, BoundaryCurve)> {
    let total = curve.total_length();
    let eps = t2 - t1;
    if !(eps > 0.0) || !(0.0..=total).contains(&t1) {
        return Err(ElasticaError::DegenerateFrame(format!(
            "probe pair ({t1}, {t2}) must satisfy 0 ≤ t1 < t2"
        )));
    }
    if eps > 0.5 * total {
        return Err(ElasticaError::DegenerateFrame(format!(
            "t2 − t1 = {eps} exceeds half the perimeter {}",
            0.5 * total
        )));
    }
    let shifted = curve.shifted(t1);
    let phi = FRAC_PI_2 - shifted.tangent_angles()[0];
    let (s, c) = phi.sin_cos();
    let rot = Matrix2::new(c, -s, s, c);
    let p0 = rot * shifted.eval(0.0).point;
    let pe = rot * shifted.eval(eps).point;
    let translation = Point::new(-pe.x, -p0.y);
    let framed = shifted.transformed(&rot, translation);
    let frame = CanonicalFrame {
        rotation: [[c, -s], [s, c]],
        translation: [translation.x, translation.y],
        t1_shift: t1,
        eps,
    };
    check_frame(&framed, eps)?;
    Ok((frame, framed))
}

/// Verifies the frame post-conditions; [`ElasticaError::FrameMissing`] otherwise.
pub fn check_frame(curve: &BoundaryCurve, eps: f64) -> Result<()> {
    let tol = FRAME_TOL * curve.total_length().max(1.0);
    let g0 = curve.eval(0.0);
    let ge = curve.eval(eps);
    let tangent_err = (g0.tangent - Point::new(0.0, 1.0)).norm();
    let problems: Vec<String> = [
        (g0.point.y.abs() > tol, format!("γ(0)_y = {:e}", g0.point.y)),
        (g0.point.x < -tol, format!("γ(0)_x = {:e} < 0", g0.point.x)),
        (ge.point.x.abs() > tol, format!("γ(ε)_x = {:e}", ge.point.x)),
        (ge.point.y < -tol, format!("γ(ε)_y = {:e} < 0", ge.point.y)),
        (tangent_err > tol, format!("|γ′(0) − (0,1)| = {tangent_err:e}")),
        (
            (g0.angle - FRAC_PI_2).rem_euclid(2.0 * PI).min((FRAC_PI_2 - g0.angle).rem_euclid(2.0 * PI)) > tol,
            format!("tangent angle {}", g0.angle),
        ),
    ]
    .into_iter()
    .filter_map(|(bad, msg)| bad.then_some(msg))
    .collect();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(ElasticaError::FrameMissing(problems.join("; ")))
    }
}

/// Times `(t₋, t_⊥, t₊)` where the tangent of a canonical curve is `(−1,0)`, `(0,−1)` and
/// `(1,0)`, i.e. where its unwrapped angle has turned by `π/2`, `π` and `3π/2`.
pub fn find_tangent_times(curve: &BoundaryCurve) -> Result<(f64, f64, f64)> {
    let base = curve.tangent_angles()[0];
    // unwrapped angles carry an arbitrary multiple of 2π
    let off = (base - FRAC_PI_2).rem_euclid(2.0 * PI);
    if off.min(2.0 * PI - off) > 1e-6 {
        return Err(ElasticaError::FrameMissing(format!(
            "initial tangent angle {base} is not π/2"
        )));
    }
    let times = [0.5 * PI, PI, 1.5 * PI].map(|turn| angle_crossing(curve, base + turn));
    let [tm, tb, tp] = times;
    let (tm, tb, tp) = (tm?, tb?, tp?);
    if !(tm < tb && tb < tp && tp < curve.total_length()) {
        return Err(ElasticaError::TangentNotFound(format!(
            "tangent times out of order: {tm}, {tb}, {tp}"
        )));
    }
    Ok((tm, tb, tp))
}

fn angle_crossing(curve: &BoundaryCurve, target: f64) -> Result<f64> {
    let angles = curve.tangent_angles();
    let s = curve.cumulative_arclength();
    let n = angles.len();
    if !(angles[0] < target && target < angles[n - 1]) {
        return Err(ElasticaError::TangentNotFound(format!(
            "tangent angle never reaches {target}; range [{}, {}]",
            angles[0],
            angles[n - 1]
        )));
    }
    let idx = angles.partition_point(|&a| a < target);
    let (mut lo, mut hi) = (s[idx - 1], s[idx]);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if curve.eval(mid).angle < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * s[n - 1].max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
