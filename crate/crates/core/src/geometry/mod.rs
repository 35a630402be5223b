//! Convex planar domains, their boundary curves, and the metric quantities used by the
//! energy and its estimates.

mod checks;
mod curve;
mod domain;
mod metrics;
mod shape;

pub use checks::{
    check_perimeter_monotonicity, check_tubular_bound, symmetric_difference_area,
    symmetric_difference_area_with, InequalityCheck, ShapeMetricReport,
};
pub use curve::{BoundaryCurve, CurveSample, MIN_SAMPLES};
pub use domain::{ConvexDomain, ConvexPolygon, SupportGrid};
pub use metrics::{
    area, diameter, diameter_pair, directed_hausdorff, distance_to_boundary, hausdorff_distance,
    perimeter,
};
pub use shape::{
    golden_section_min, grid_angles, ConvexShape, SupportJet, CONVEXITY_FLOOR_REL, DEFAULT_GRID,
    DEFAULT_K_MAX,
};

/// Planar point / vector.
pub type Point = nalgebra::Vector2<f64>;

/// z-component of the planar cross product.
#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Signed shoelace area and area centroid of a closed polygon (no closing duplicate).
pub fn polygon_area_centroid(vertices: &[Point]) -> (f64, Point) {
    let n = vertices.len();
    let mut twice_area = 0.0;
    let mut c = Point::zeros();
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let w = cross(p, q);
        twice_area += w;
        c += (p + q) * w;
    }
    let area = 0.5 * twice_area;
    if area.abs() < f64::MIN_POSITIVE {
        let mean = vertices.iter().fold(Point::zeros(), |acc, p| acc + p) / n.max(1) as f64;
        return (0.0, mean);
    }
    (area, c / (6.0 * area))
}
