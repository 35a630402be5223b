use super::curve::BoundaryCurve;
use super::domain::SupportGrid;
use super::shape::{ConvexShape, DEFAULT_GRID};
use super::{cross, polygon_area_centroid, Point};
use crate::error::Result;

/// Diameter of the sampled boundary, by rotating calipers over the sample polygon.
pub fn diameter(curve: &BoundaryCurve) -> f64 {
    diameter_pair(curve.vertices()).0
}

/// Largest pairwise distance of a convex counterclockwise polygon together with the first
/// maximal pair met in scan order.
pub fn diameter_pair(v: &[Point]) -> (f64, (usize, usize)) {
    let n = v.len();
    match n {
        0 | 1 => return (0.0, (0, 0)),
        2 => return ((v[1] - v[0]).norm(), (0, 1)),
        _ => {}
    }
    let twice_area = |i: usize, j: usize, k: usize| cross(v[j] - v[i], v[k] - v[i]);
    let mut best = (0.0, (0, 0));
    let consider = |a: usize, b: usize, best: &mut (f64, (usize, usize))| {
        let d = (v[a] - v[b]).norm();
        if d > best.0 {
            *best = (d, (a.min(b), a.max(b)));
        }
    };
    let mut j = 1;
    for i in 0..n {
        let i1 = (i + 1) % n;
        let mut guard = 0;
        while guard < n && twice_area(i, i1, (j + 1) % n) >= twice_area(i, i1, j) {
            consider(i, j, &mut best);
            consider(i1, j, &mut best);
            j = (j + 1) % n;
            guard += 1;
        }
        consider(i, j, &mut best);
        consider(i1, j, &mut best);
    }
    best
}

/// Shoelace area of the sample polygon.
pub fn area(curve: &BoundaryCurve) -> f64 {
    polygon_area_centroid(curve.vertices()).0
}

/// Sum of edge lengths of the closed sample polygon.
pub fn perimeter(curve: &BoundaryCurve) -> f64 {
    curve
        .points()
        .windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .sum()
}

/// `dist(x, ∂Ω)` for `x` inside the shape, by support minimisation on the default grid.
pub fn distance_to_boundary(shape: &ConvexShape, x: Point) -> Result<f64> {
    SupportGrid::new(shape, DEFAULT_GRID).distance(x)
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&e) / len2).clamp(0.0, 1.0);
    (p - (a + e * t)).norm()
}

/// `max_{a ∈ A} dist(a, B)` with `A` the sample points of `from` and `B` the closed
/// polyline of `to`. Exact over the samples; scans start at the previous nearest segment
/// and stop once a point cannot raise the running maximum.
pub fn directed_hausdorff(from: &BoundaryCurve, to: &BoundaryCurve) -> f64 {
    let pts = to.points();
    let m = pts.len() - 1;
    let mut cmax: f64 = 0.0;
    let mut last = 0usize;
    for &a in from.vertices() {
        let mut cmin = f64::INFINITY;
        let mut best = last;
        for k in 0..m {
            // visit last, last+1, last-1, last+2, ...
            let offset = k.div_ceil(2);
            let idx = if k % 2 == 1 {
                (last + offset) % m
            } else {
                (last + m - offset % m) % m
            };
            let d = point_segment_distance(a, pts[idx], pts[idx + 1]);
            if d < cmin {
                cmin = d;
                best = idx;
            }
            if cmin < cmax {
                break;
            }
        }
        cmax = cmax.max(cmin);
        last = best;
    }
    cmax
}

/// Symmetric Hausdorff distance between two sampled boundary curves.
pub fn hausdorff_distance(c1: &BoundaryCurve, c2: &BoundaryCurve) -> f64 {
    directed_hausdorff(c1, c2).max(directed_hausdorff(c2, c1))
}
