#![allow(dead_code)]

use elastica::geometry::{ConvexDomain, ConvexShape, Point, SupportGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random strictly convex shape: modes 2..=6 with |c_k| ≤ 0.04·a0/k², translation up to
/// 0.3·a0, so `h + h″ ≥ 0.6·a0` and the origin stays interior.
pub fn random_shape(rng: &mut ChaCha8Rng, a0_range: std::ops::Range<f64>) -> ConvexShape {
    let a0 = rng.random_range(a0_range);
    let mut cos = vec![0.0; 6];
    let mut sin = vec![0.0; 6];
    cos[0] = rng.random_range(-0.2..0.2) * a0;
    sin[0] = rng.random_range(-0.2..0.2) * a0;
    for k in 2..=6 {
        let amp = 0.04 * a0 / (k * k) as f64;
        cos[k - 1] = rng.random_range(-amp..amp);
        sin[k - 1] = rng.random_range(-amp..amp);
    }
    let s = ConvexShape::new(a0, cos, sin).unwrap();
    s.validate().unwrap();
    s
}

/// Uniform interior point by rejection from the bounding box.
pub fn interior_point(rng: &mut ChaCha8Rng, grid: &SupportGrid) -> Point {
    let (lo, hi) = grid.bounding_box();
    loop {
        let x = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if grid.contains(x) {
            return x;
        }
    }
}

/// `min dist(x, polyline)` over a closed polyline through `n` boundary points.
pub fn brute_force_distance(shape: &ConvexShape, x: Point, n: usize) -> f64 {
    let pts: Vec<Point> = (0..n)
        .map(|i| shape.point(std::f64::consts::TAU * i as f64 / n as f64))
        .collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let e = b - a;
        let t = ((x - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
        best = best.min((x - (a + e * t)).norm());
    }
    best
}
