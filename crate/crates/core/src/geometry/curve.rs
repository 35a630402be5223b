use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::Matrix2;

use super::shape::ConvexShape;
use super::{cross, Point};
use crate::error::{ElasticaError, Result};

/// Minimum number of samples accepted by [`BoundaryCurve::from_shape`].
pub const MIN_SAMPLES: usize = 16;

/// Closed, counterclockwise, arc-length-sampled boundary curve.
///
/// Stores `n + 1` samples; the last one repeats the first so the curve is explicitly
/// closed. `tangent_angles` are unwrapped, so `tangent_angles[n] − tangent_angles[0]` is
/// the total turning.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    points: Vec<Point>,
    arclength: Vec<f64>,
    tangents: Vec<Point>,
    curvature: Vec<f64>,
    tangent_angles: Vec<f64>,
    total_length: f64,
}

/// Interpolated state of a curve at one arc-length parameter.
#[derive(Clone, Copy, Debug)]
pub struct CurveSample {
    pub point: Point,
    pub tangent: Point,
    pub curvature: f64,
    /// Unwrapped tangent angle, continuous from the curve's first sample.
    pub angle: f64,
}

impl CurveSample {
    /// `γ''` of the arc-length parameterisation: `κ` times the left normal.
    pub fn second_derivative(&self) -> Point {
        Point::new(-self.tangent.y, self.tangent.x) * self.curvature
    }
}

impl BoundaryCurve {
    /// Samples `n` points at uniform arc-length spacing from the support-function
    /// boundary map, starting at normal angle 0.
    pub fn from_shape(shape: &ConvexShape, n: usize) -> Result<Self> {
        if n < MIN_SAMPLES {
            return Err(ElasticaError::InvalidParameter(format!(
                "boundary needs at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        shape.validate()?;
        let total = shape.perimeter();
        let mut points = Vec::with_capacity(n + 1);
        let mut tangents = Vec::with_capacity(n + 1);
        let mut curvature = Vec::with_capacity(n + 1);
        let mut angles = Vec::with_capacity(n + 1);
        let mut arclength = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let s = total * i as f64 / n as f64;
            let theta = if i == n {
                TAU
            } else {
                shape.angle_at_arc_length(s)
            };
            let jet = shape.jet(theta);
            let (sn, cs) = theta.sin_cos();
            points.push(Point::new(jet.h * cs - jet.dh * sn, jet.h * sn + jet.dh * cs));
            tangents.push(Point::new(-sn, cs));
            curvature.push(1.0 / jet.radius_of_curvature());
            angles.push(theta + FRAC_PI_2);
            arclength.push(s);
        }
        points[n] = points[0];
        Ok(Self {
            points,
            arclength,
            tangents,
            curvature,
            tangent_angles: angles,
            total_length: total,
        })
    }

    /// Assembles a curve from explicit samples. The input must already repeat its first
    /// sample at the end; tangents are normalised and their angles unwrapped.
    pub fn from_parts(
        points: Vec<Point>,
        tangents: Vec<Point>,
        curvature: Vec<f64>,
        arclength: Vec<f64>,
    ) -> Result<Self> {
        let m = points.len();
        if m < 4 || tangents.len() != m || curvature.len() != m || arclength.len() != m {
            return Err(ElasticaError::InvalidParameter(format!(
                "inconsistent curve sample counts: {} points, {} tangents, {} curvatures, {} arclengths",
                m,
                tangents.len(),
                curvature.len(),
                arclength.len()
            )));
        }
        if arclength.windows(2).any(|w| w[1] < w[0]) {
            return Err(ElasticaError::InvalidParameter(
                "cumulative arclength must be nondecreasing".into(),
            ));
        }
        let tangents: Vec<Point> = tangents.iter().map(|t| t / t.norm()).collect();
        let mut angles = Vec::with_capacity(m);
        let mut prev = tangents[0].y.atan2(tangents[0].x);
        angles.push(prev);
        for t in &tangents[1..] {
            let raw = t.y.atan2(t.x);
            let mut d = raw - prev.rem_euclid(TAU);
            d -= TAU * (d / TAU).round();
            prev += d;
            angles.push(prev);
        }
        let total_length = arclength[m - 1] - arclength[0];
        let offset = arclength[0];
        Ok(Self {
            points,
            arclength: arclength.iter().map(|s| s - offset).collect(),
            tangents,
            curvature,
            tangent_angles: angles,
            total_length,
        })
    }

    /// Number of distinct samples (the closing duplicate excluded).
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `n + 1` points, closing duplicate included.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The `n` distinct polygon vertices.
    pub fn vertices(&self) -> &[Point] {
        &self.points[..self.len()]
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.arclength
    }

    pub fn tangents(&self) -> &[Point] {
        &self.tangents
    }

    pub fn curvature_samples(&self) -> &[f64] {
        &self.curvature
    }

    pub fn tangent_angles(&self) -> &[f64] {
        &self.tangent_angles
    }

    /// `H¹(∂Ω)` as carried by the parameterisation.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Sum of signed exterior angles of the sample polygon.
    pub fn total_turning(&self) -> f64 {
        let v = self.vertices();
        let n = v.len();
        (0..n)
            .map(|i| {
                let e0 = v[i] - v[(i + n - 1) % n];
                let e1 = v[(i + 1) % n] - v[i];
                cross(e0, e1).atan2(e0.dot(&e1))
            })
            .sum()
    }

    /// Checks closure, unit tangents, convex counterclockwise orientation and total
    /// turning `2π`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let scale = self.total_length.max(f64::MIN_POSITIVE);
        let n = self.len();
        if (self.points[n] - self.points[0]).norm() > tol * scale {
            return Err(ElasticaError::DegenerateShape("curve is not closed".into()));
        }
        if let Some(i) = self.tangents.iter().position(|t| (t.norm() - 1.0).abs() > 1e-9) {
            return Err(ElasticaError::DegenerateShape(format!("tangent {i} is not unit length")));
        }
        let v = self.vertices();
        for i in 0..n {
            let e0 = v[(i + 1) % n] - v[i];
            let e1 = v[(i + 2) % n] - v[(i + 1) % n];
            let c = cross(e0, e1);
            if c < -tol * e0.norm() * e1.norm() {
                return Err(ElasticaError::NonConvexPolyline {
                    vertex: (i + 1) % n,
                    cross: c,
                });
            }
        }
        let turning = self.total_turning();
        if (turning - TAU).abs() > 1e-3 {
            return Err(ElasticaError::DegenerateShape(format!(
                "total turning {turning} differs from 2π"
            )));
        }
        Ok(())
    }

    fn segment_of(&self, t: f64) -> usize {
        let n = self.len();
        let idx = self.arclength.partition_point(|&s| s <= t);
        idx.clamp(1, n) - 1
    }

    /// Cubic Hermite interpolation at arc length `t` (taken modulo the total length).
    ///
    /// Positions use the sampled unit tangents as endpoint derivatives; the tangent angle
    /// uses the sampled curvatures, so curvature is the derivative of the interpolated angle.
    pub fn eval(&self, t: f64) -> CurveSample {
        let t = t.rem_euclid(self.total_length);
        let i = self.segment_of(t);
        let (s0, s1) = (self.arclength[i], self.arclength[i + 1]);
        let d = s1 - s0;
        if d <= 0.0 {
            return CurveSample {
                point: self.points[i],
                tangent: self.tangents[i],
                curvature: self.curvature[i],
                angle: self.tangent_angles[i],
            };
        }
        let u = (t - s0) / d;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        let dh00 = 6.0 * u2 - 6.0 * u;
        let dh10 = 3.0 * u2 - 4.0 * u + 1.0;
        let dh01 = -6.0 * u2 + 6.0 * u;
        let dh11 = 3.0 * u2 - 2.0 * u;

        let (p0, p1) = (self.points[i], self.points[i + 1]);
        let (t0, t1) = (self.tangents[i], self.tangents[i + 1]);
        let point = p0 * h00 + t0 * (h10 * d) + p1 * h01 + t1 * (h11 * d);

        let (a0, a1) = (self.tangent_angles[i], self.tangent_angles[i + 1]);
        let (k0, k1) = (self.curvature[i], self.curvature[i + 1]);
        let angle = a0 * h00 + k0 * d * h10 + a1 * h01 + k1 * d * h11;
        let curvature = (a0 * dh00 + k0 * d * dh10 + a1 * dh01 + k1 * d * dh11) / d;
        let (sn, cs) = angle.sin_cos();
        CurveSample {
            point,
            tangent: Point::new(cs, sn),
            curvature,
            angle,
        }
    }

    /// Applies `x ↦ R x + t` with `R` a rotation; arc length and curvature are unchanged.
    pub fn transformed(&self, rotation: &Matrix2<f64>, translation: Point) -> Self {
        let phi = rotation[(1, 0)].atan2(rotation[(0, 0)]);
        Self {
            points: self.points.iter().map(|p| rotation * p + translation).collect(),
            arclength: self.arclength.clone(),
            tangents: self.tangents.iter().map(|t| rotation * t).collect(),
            curvature: self.curvature.clone(),
            tangent_angles: self.tangent_angles.iter().map(|a| a + phi).collect(),
            total_length: self.total_length,
        }
    }

    /// Reparameterises so that arc length `t0` of `self` becomes parameter 0. Samples are
    /// re-evaluated on the same arc-length grid.
    pub fn shifted(&self, t0: f64) -> Self {
        let n = self.len();
        let mut samples: Vec<CurveSample> = self.arclength[..n]
            .iter()
            .map(|s| self.eval(s + t0))
            .collect();
        // unwrap angles relative to the new first sample
        let mut prev = samples[0].angle;
        for s in samples.iter_mut().skip(1) {
            let mut d = s.angle - prev;
            d -= TAU * (d / TAU).round();
            s.angle = prev + d;
            prev = s.angle;
        }
        let first = samples[0];
        let mut points: Vec<Point> = samples.iter().map(|s| s.point).collect();
        let mut tangents: Vec<Point> = samples.iter().map(|s| s.tangent).collect();
        let mut curvature: Vec<f64> = samples.iter().map(|s| s.curvature).collect();
        let mut angles: Vec<f64> = samples.iter().map(|s| s.angle).collect();
        points.push(first.point);
        tangents.push(first.tangent);
        curvature.push(first.curvature);
        angles.push(first.angle + TAU);
        Self {
            points,
            arclength: self.arclength.clone(),
            tangents,
            curvature,
            tangent_angles: angles,
            total_length: self.total_length,
        }
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p * s).collect(),
            arclength: self.arclength.iter().map(|a| a * s).collect(),
            tangents: self.tangents.clone(),
            curvature: self.curvature.iter().map(|k| k / s).collect(),
            tangent_angles: self.tangent_angles.clone(),
            total_length: self.total_length * s,
        }
    }

    /// Index of the sample with the largest curvature (first in scan order).
    pub fn argmax_curvature(&self) -> usize {
        let mut best = 0;
        for (i, &k) in self.curvature[..self.len()].iter().enumerate() {
            if k > self.curvature[best] {
                best = i;
            }
        }
        best
    }
}
