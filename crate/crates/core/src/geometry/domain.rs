//! Convex domains queried by the energy quadratures: distance to the boundary, radial
//! extent from an interior anchor, and bounding boxes.

use std::f64::consts::{PI, TAU};

use super::shape::{golden_section_min, ConvexShape};
use super::{cross, polygon_area_centroid, Point};
use crate::error::{ElasticaError, Result};

/// A compact convex planar domain.
pub trait ConvexDomain: Sync {
    /// `min_θ (h(θ) − ⟨x, u(θ)⟩)`: the distance to the boundary for interior `x`, negative
    /// outside.
    fn signed_distance(&self, x: Point) -> f64;

    /// Interior point used as the pole of polar quadrature.
    fn anchor(&self) -> Point;

    /// Distance from [`ConvexDomain::anchor`] to the boundary along the unit direction at
    /// angle `phi`.
    fn ray_extent(&self, phi: f64) -> f64;

    /// Axis-aligned bounding box `(min, max)`.
    fn bounding_box(&self) -> (Point, Point);

    fn contains(&self, x: Point) -> bool {
        self.signed_distance(x) >= 0.0
    }
}

/// Support-function evaluator with a precomputed angle grid.
///
/// Distances come from a grid scan of `h(θ_j) − ⟨x, u(θ_j)⟩` followed by a safeguarded
/// Newton refinement (golden section as fallback) of every grid-local minimum close enough
/// to the grid minimum to hide the true one.
pub struct SupportGrid<'a> {
    shape: &'a ConvexShape,
    cos: Vec<f64>,
    sin: Vec<f64>,
    h: Vec<f64>,
    step: f64,
    max_abs_d2h: f64,
    centroid: Point,
    boundary_theta: Vec<f64>,
    boundary_angle: Vec<f64>,
}

impl<'a> SupportGrid<'a> {
    pub fn new(shape: &'a ConvexShape, grid: usize) -> Self {
        let grid = grid.max(16);
        let step = TAU / grid as f64;
        let mut cos = Vec::with_capacity(grid);
        let mut sin = Vec::with_capacity(grid);
        let mut h = Vec::with_capacity(grid);
        let mut max_abs_d2h: f64 = 0.0;
        for i in 0..grid {
            let t = step * i as f64;
            let (s, c) = t.sin_cos();
            let j = shape.jet(t);
            cos.push(c);
            sin.push(s);
            h.push(j.h);
            max_abs_d2h = max_abs_d2h.max(j.d2h.abs());
        }

        // dense boundary polygon for the centroid and ray-bracketing tables
        let nb = 1024;
        let boundary: Vec<Point> = (0..nb).map(|i| shape.point(TAU * i as f64 / nb as f64)).collect();
        let (_, centroid) = polygon_area_centroid(&boundary);
        let mut boundary_theta = Vec::with_capacity(nb + 1);
        let mut boundary_angle = Vec::with_capacity(nb + 1);
        let mut prev = f64::NAN;
        for i in 0..=nb {
            let theta = TAU * i as f64 / nb as f64;
            let d = boundary[i % nb] - centroid;
            let raw = d.y.atan2(d.x);
            let a = if prev.is_nan() {
                raw
            } else {
                let mut diff = raw - prev;
                diff -= TAU * (diff / TAU).round();
                prev + diff
            };
            prev = a;
            boundary_theta.push(theta);
            boundary_angle.push(a);
        }
        Self {
            shape,
            cos,
            sin,
            h,
            step,
            max_abs_d2h,
            centroid,
            boundary_theta,
            boundary_angle,
        }
    }

    pub fn shape(&self) -> &ConvexShape {
        self.shape
    }

    /// Like [`ConvexDomain::signed_distance`], but errors for points outside.
    pub fn distance(&self, x: Point) -> Result<f64> {
        let d = self.signed_distance(x);
        let tol = 1e-12 * self.shape.a0().abs().max(1.0);
        if d < -tol {
            return Err(ElasticaError::PointOutside { x: x.x, y: x.y });
        }
        Ok(d.max(0.0))
    }

    fn objective(&self, x: Point, theta: f64) -> (f64, f64, f64) {
        let j = self.shape.jet(theta);
        let (s, c) = theta.sin_cos();
        let f = j.h - x.x * c - x.y * s;
        let df = j.dh + x.x * s - x.y * c;
        let d2f = j.d2h + x.x * c + x.y * s;
        (f, df, d2f)
    }

    fn refine(&self, x: Point, centre: f64) -> f64 {
        let (lo, hi) = (centre - self.step, centre + self.step);
        let mut theta = centre;
        let (mut f, mut df, mut d2f) = self.objective(x, theta);
        for _ in 0..8 {
            if d2f <= 0.0 {
                break;
            }
            let next = theta - df / d2f;
            if !(lo..=hi).contains(&next) {
                break;
            }
            let (nf, ndf, nd2f) = self.objective(x, next);
            if nf > f + 1e-15 * f.abs().max(1.0) {
                break;
            }
            let done = (next - theta).abs() < 1e-13;
            theta = next;
            f = nf;
            df = ndf;
            d2f = nd2f;
            if done {
                return f;
            }
        }
        if df.abs() < 1e-12 && d2f > 0.0 {
            return f;
        }
        let (_, g) = golden_section_min(|t| self.objective(x, t).0, lo, hi, 1e-9);
        g.min(f)
    }
}

impl ConvexDomain for SupportGrid<'_> {
    fn signed_distance(&self, x: Point) -> f64 {
        let n = self.h.len();
        let value = |j: usize| self.h[j] - x.x * self.cos[j] - x.y * self.sin[j];
        let mut grid_min = f64::INFINITY;
        for j in 0..n {
            grid_min = grid_min.min(value(j));
        }
        // f'' = h'' + ⟨x, u⟩ bounds the gap between grid and continuous minima
        let curv = self.max_abs_d2h + x.norm();
        let threshold = grid_min + curv * self.step * self.step;
        let mut best = grid_min;
        let mut prev = value(n - 1);
        let mut cur = value(0);
        for j in 0..n {
            let next = value((j + 1) % n);
            if cur <= threshold && cur <= prev && cur <= next {
                best = best.min(self.refine(x, self.step * j as f64));
            }
            prev = cur;
            cur = next;
        }
        best
    }

    fn anchor(&self) -> Point {
        self.centroid
    }

    fn ray_extent(&self, phi: f64) -> f64 {
        let a0 = self.boundary_angle[0];
        let target = a0 + (phi - a0).rem_euclid(TAU);
        let idx = self.boundary_angle.partition_point(|&a| a <= target);
        let i = idx.clamp(1, self.boundary_angle.len() - 1) - 1;
        let (mut lo, mut hi) = (self.boundary_theta[i], self.boundary_theta[i + 1]);
        let offset = |theta: f64| {
            let d = self.shape.point(theta) - self.centroid;
            let mut diff = d.y.atan2(d.x) - target;
            diff -= TAU * (diff / TAU).round();
            diff
        };
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if offset(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        (self.shape.point(0.5 * (lo + hi)) - self.centroid).norm()
    }

    fn bounding_box(&self) -> (Point, Point) {
        let s = self.shape;
        (
            Point::new(-s.support(PI), -s.support(1.5 * PI)),
            Point::new(s.support(0.0), s.support(0.5 * PI)),
        )
    }
}

/// Convex polygon as an intersection of half-planes `⟨x, n_e⟩ ≤ c_e`.
#[derive(Clone, Debug)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    normals: Vec<Point>,
    offsets: Vec<f64>,
    centroid: Point,
    area: f64,
    vertex_angles: Vec<f64>,
}

impl ConvexPolygon {
    /// Builds from counterclockwise vertices (no closing duplicate). Rejects reflex
    /// vertices beyond the relative tolerance `tol`.
    pub fn new(vertices: Vec<Point>, tol: f64) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(ElasticaError::InvalidShape(format!("polygon needs ≥ 3 vertices, got {n}")));
        }
        let (area, centroid) = polygon_area_centroid(&vertices);
        if area <= 0.0 {
            return Err(ElasticaError::DegenerateShape(
                "polygon is not counterclockwise with positive area".into(),
            ));
        }
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            let c = cross(e0, e1);
            if c < -tol * e0.norm() * e1.norm() {
                return Err(ElasticaError::NonConvexPolyline {
                    vertex: (i + 1) % n,
                    cross: c,
                });
            }
        }
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let e = vertices[(i + 1) % n] - vertices[i];
            let len = e.norm();
            if len == 0.0 {
                continue;
            }
            let nrm = Point::new(e.y / len, -e.x / len);
            normals.push(nrm);
            offsets.push(nrm.dot(&vertices[i]));
        }
        let mut vertex_angles = Vec::with_capacity(n);
        let mut prev = f64::NAN;
        for v in &vertices {
            let d = v - centroid;
            let raw = d.y.atan2(d.x);
            let a = if prev.is_nan() {
                raw
            } else {
                let mut diff = raw - prev;
                diff -= TAU * (diff / TAU).round();
                prev + diff
            };
            prev = a;
            vertex_angles.push(a);
        }
        Ok(Self {
            vertices,
            normals,
            offsets,
            centroid,
            area,
            vertex_angles,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }
}

impl ConvexDomain for ConvexPolygon {
    fn signed_distance(&self, x: Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, c)| c - n.dot(&x))
            .fold(f64::INFINITY, f64::min)
    }

    fn anchor(&self) -> Point {
        self.centroid
    }

    fn ray_extent(&self, phi: f64) -> f64 {
        let n = self.vertices.len();
        let a0 = self.vertex_angles[0];
        let target = a0 + (phi - a0).rem_euclid(TAU);
        let idx = self.vertex_angles.partition_point(|&a| a <= target);
        let (i, j) = if idx == 0 || idx >= n { (n - 1, 0) } else { (idx - 1, idx) };
        let dir = Point::new(phi.cos(), phi.sin());
        let (p, q) = (self.vertices[i] - self.centroid, self.vertices[j] - self.centroid);
        // solve r·dir = p + s (q − p)
        let e = q - p;
        let denom = cross(dir, e);
        if denom.abs() < f64::MIN_POSITIVE {
            return p.norm().max(q.norm());
        }
        cross(p, e) / denom
    }

    fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }
}
