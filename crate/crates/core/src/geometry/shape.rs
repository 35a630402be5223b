use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{ElasticaError, Result};

/// Default Fourier truncation order of the support function.
pub const DEFAULT_K_MAX: usize = 16;

/// Default density of the uniform θ-grid used for convexity and containment checks.
pub const DEFAULT_GRID: usize = 4096;

/// Strict-convexity floor, relative to the mean support value `a0`.
pub const CONVEXITY_FLOOR_REL: f64 = 1e-8;

/// A compact convex body given by a truncated Fourier series of its support function
///
/// `h(θ) = a0 + Σ_k (a_k cos kθ + b_k sin kθ)`, with `cos_coeffs[k-1] = a_k` and
/// `sin_coeffs[k-1] = b_k`. The boundary is `γ(θ) = h u(θ) + h' u⊥(θ)` and its radius of
/// curvature is `h + h''`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexShape {
    a0: f64,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
}

/// Support function and its first three θ-derivatives at one angle.
#[derive(Clone, Copy, Debug)]
pub struct SupportJet {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
    pub d3h: f64,
}

impl SupportJet {
    pub fn radius_of_curvature(&self) -> f64 {
        self.h + self.d2h
    }
}

impl ConvexShape {
    /// Builds a shape from raw coefficients. Only structural checks happen here; call
    /// [`ConvexShape::validate`] for the convexity invariants.
    pub fn new(a0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        if cos_coeffs.len() != sin_coeffs.len() {
            return Err(ElasticaError::InvalidShape(format!(
                "coefficient lists differ in length ({} vs {})",
                cos_coeffs.len(),
                sin_coeffs.len()
            )));
        }
        if !a0.is_finite() || cos_coeffs.iter().chain(&sin_coeffs).any(|c| !c.is_finite()) {
            return Err(ElasticaError::InvalidShape("non-finite coefficient".into()));
        }
        Ok(Self {
            a0,
            cos_coeffs,
            sin_coeffs,
        })
    }

    /// Disk of radius `r` centred at the origin.
    pub fn disk(r: f64) -> Self {
        Self {
            a0: r,
            cos_coeffs: Vec::new(),
            sin_coeffs: Vec::new(),
        }
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    /// Truncation order K.
    pub fn order(&self) -> usize {
        self.cos_coeffs.len()
    }

    /// Flat coefficient vector `[a0, a_1..a_K, b_1..b_K]`.
    pub fn to_coeffs(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + 2 * self.order());
        v.push(self.a0);
        v.extend_from_slice(&self.cos_coeffs);
        v.extend_from_slice(&self.sin_coeffs);
        v
    }

    /// Inverse of [`ConvexShape::to_coeffs`].
    pub fn from_coeffs(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(ElasticaError::InvalidShape(format!(
                "coefficient vector must have odd length 1 + 2K, got {}",
                coeffs.len()
            )));
        }
        let k = (coeffs.len() - 1) / 2;
        Self::new(
            coeffs[0],
            coeffs[1..=k].to_vec(),
            coeffs[k + 1..].to_vec(),
        )
    }

    /// Pads the series with zero coefficients up to order `k`.
    pub fn with_order(&self, k: usize) -> Self {
        let mut out = self.clone();
        if k > out.order() {
            out.cos_coeffs.resize(k, 0.0);
            out.sin_coeffs.resize(k, 0.0);
        }
        out
    }

    pub fn support(&self, theta: f64) -> f64 {
        self.jet(theta).h
    }

    /// `h, h', h'', h'''` at `theta`, using the angle-addition recurrence for `cos kθ`.
    pub fn jet(&self, theta: f64) -> SupportJet {
        let (s1, c1) = theta.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut jet = SupportJet {
            h: self.a0,
            dh: 0.0,
            d2h: 0.0,
            d3h: 0.0,
        };
        for (i, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let (cn, sn) = (c * c1 - s * s1, s * c1 + c * s1);
            c = cn;
            s = sn;
            let k = (i + 1) as f64;
            let t = a * c + b * s;
            let dt = k * (b * c - a * s);
            jet.h += t;
            jet.dh += dt;
            jet.d2h -= k * k * t;
            jet.d3h -= k * k * dt;
        }
        jet
    }

    /// Radius of curvature `h + h''` of the boundary point with outward normal `u(θ)`.
    pub fn radius_of_curvature(&self, theta: f64) -> f64 {
        self.jet(theta).radius_of_curvature()
    }

    /// Boundary point with outward normal `u(θ)`.
    pub fn point(&self, theta: f64) -> Point {
        let j = self.jet(theta);
        let (s, c) = theta.sin_cos();
        Point::new(j.h * c - j.dh * s, j.h * s + j.dh * c)
    }

    /// Arc length of the boundary from normal angle 0 to `theta`, in closed form.
    pub fn arc_length(&self, theta: f64) -> f64 {
        let mut s_acc = self.a0 * theta;
        for (i, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k = (i + 1) as f64;
            let (sk, ck) = (k * theta).sin_cos();
            s_acc += (1.0 - k * k) * (a * sk + b * (1.0 - ck)) / k;
        }
        s_acc
    }

    /// Perimeter, exactly `2π a0` (Cauchy's formula).
    pub fn perimeter(&self) -> f64 {
        TAU * self.a0
    }

    /// Enclosed area `½∫(h² − h'²)dθ` in closed form.
    pub fn area(&self) -> f64 {
        let modes: f64 = self
            .cos_coeffs
            .iter()
            .zip(&self.sin_coeffs)
            .enumerate()
            .map(|(i, (a, b))| {
                let k = (i + 1) as f64;
                (1.0 - k * k) * (a * a + b * b)
            })
            .sum();
        PI * self.a0 * self.a0 + 0.5 * PI * modes
    }

    /// Width in direction `u(θ)`: `h(θ) + h(θ + π)`.
    pub fn width(&self, theta: f64) -> f64 {
        self.support(theta) + self.support(theta + PI)
    }

    /// Diameter as the maximal width, located on a grid and refined by golden section.
    pub fn diameter(&self) -> f64 {
        let n = 1024;
        let step = PI / n as f64;
        let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
        for i in 0..n {
            let w = self.width(i as f64 * step);
            if w > best {
                best = w;
                best_i = i;
            }
        }
        let centre = best_i as f64 * step;
        let (_, refined) = golden_section_min(|t| -self.width(t), centre - step, centre + step, 1e-12);
        best.max(-refined)
    }

    /// Steiner point `(a_1, b_1)`.
    pub fn steiner_point(&self) -> Point {
        match (self.cos_coeffs.first(), self.sin_coeffs.first()) {
            (Some(&a), Some(&b)) => Point::new(a, b),
            _ => Point::zeros(),
        }
    }

    /// Same body translated by `t` (the k = 1 modes absorb translations).
    pub fn translated(&self, t: Point) -> Self {
        let mut out = self.with_order(1);
        out.cos_coeffs[0] += t.x;
        out.sin_coeffs[0] += t.y;
        out
    }

    /// Same body translated so its Steiner point sits at the origin.
    pub fn centered(&self) -> Self {
        self.translated(-self.steiner_point())
    }

    /// Same body rotated counterclockwise by `phi` about the origin.
    pub fn rotated(&self, phi: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.order() {
            let k = (i + 1) as f64;
            let (s, c) = (k * phi).sin_cos();
            let (a, b) = (self.cos_coeffs[i], self.sin_coeffs[i]);
            out.cos_coeffs[i] = a * c - b * s;
            out.sin_coeffs[i] = a * s + b * c;
        }
        out
    }

    /// Homothety about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a0: self.a0 * s,
            cos_coeffs: self.cos_coeffs.iter().map(|c| c * s).collect(),
            sin_coeffs: self.sin_coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Strict-convexity floor `δ_conv` for this shape.
    pub fn convexity_floor(&self) -> f64 {
        CONVEXITY_FLOOR_REL * self.a0.abs()
    }

    /// Minimum of `h + h''` over a uniform grid of `grid` angles.
    pub fn min_radius_of_curvature(&self, grid: usize) -> f64 {
        grid_angles(grid)
            .map(|t| self.radius_of_curvature(t))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the invariants on the default grid.
    pub fn validate(&self) -> Result<()> {
        self.validate_on(DEFAULT_GRID)
    }

    /// Checks `h > 0` (origin interior) and `h + h'' ≥ δ_conv` on a uniform grid.
    pub fn validate_on(&self, grid: usize) -> Result<()> {
        if self.a0 <= 0.0 {
            return Err(ElasticaError::DegenerateShape(format!(
                "mean support value {} is not positive",
                self.a0
            )));
        }
        let floor = self.convexity_floor();
        let mut min_h = f64::INFINITY;
        let mut min_rho = f64::INFINITY;
        for t in grid_angles(grid) {
            let j = self.jet(t);
            min_h = min_h.min(j.h);
            min_rho = min_rho.min(j.radius_of_curvature());
        }
        if min_rho < floor {
            return Err(ElasticaError::ConvexityViolation {
                min_radius: min_rho,
                floor,
            });
        }
        if min_h <= 0.0 {
            return Err(ElasticaError::DegenerateShape(format!(
                "support function reaches {min_h:.3e}; origin not interior"
            )));
        }
        Ok(())
    }

    /// Normal angle whose boundary point lies at arc length `s` (modulo the perimeter).
    pub fn angle_at_arc_length(&self, s: f64) -> f64 {
        let total = self.perimeter();
        let s = s.rem_euclid(total);
        let (mut lo, mut hi) = (0.0, TAU);
        let mut theta = TAU * s / total;
        for _ in 0..100 {
            let f = self.arc_length(theta) - s;
            if f.abs() <= 1e-15 * total {
                break;
            }
            if f > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let rho = self.radius_of_curvature(theta);
            let mut next = theta - f / rho;
            if !(next > lo && next < hi) || rho <= 0.0 {
                next = 0.5 * (lo + hi);
            }
            if (next - theta).abs() < 1e-16 {
                theta = next;
                break;
            }
            theta = next;
        }
        theta
    }
}

/// `n` equally spaced angles in `[0, 2π)`.
pub fn grid_angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

/// Golden-section minimisation on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ellipse_like() -> ConvexShape {
        ConvexShape::new(1.0, vec![0.0, 0.1], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn jet_matches_finite_differences() {
        let s = ConvexShape::new(1.0, vec![0.02, 0.1, -0.03], vec![0.01, 0.04, 0.02]).unwrap();
        let h = 1e-5;
        for &t in &[0.0, 0.7, 2.1, 4.4] {
            let j = s.jet(t);
            let fd1 = (s.support(t + h) - s.support(t - h)) / (2.0 * h);
            let fd2 = (s.jet(t + h).dh - s.jet(t - h).dh) / (2.0 * h);
            let fd3 = (s.jet(t + h).d2h - s.jet(t - h).d2h) / (2.0 * h);
            assert_relative_eq!(j.dh, fd1, epsilon = 1e-8);
            assert_relative_eq!(j.d2h, fd2, epsilon = 1e-7);
            assert_relative_eq!(j.d3h, fd3, epsilon = 1e-6);
        }
    }

    #[test]
    fn radius_of_curvature_closed_form() {
        // h + h'' = 1 − 0.3 cos 2θ
        let s = ellipse_like();
        for &t in &[0.0, 0.3, 1.0, PI / 2.0] {
            assert_relative_eq!(s.radius_of_curvature(t), 1.0 - 0.3 * (2.0 * t).cos(), epsilon = 1e-14);
        }
        assert_relative_eq!(s.min_radius_of_curvature(4096), 0.7, epsilon = 1e-12);
    }

    #[test]
    fn convexity_violation_detected() {
        let s = ConvexShape::new(1.0, vec![0.0, 0.5], vec![0.0, 0.0]).unwrap();
        assert!(matches!(s.validate(), Err(ElasticaError::ConvexityViolation { .. })));
        assert!(ellipse_like().validate().is_ok());
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(ConvexShape::new(1.0, vec![0.0], vec![]).is_err());
        assert!(ConvexShape::new(f64::NAN, vec![], vec![]).is_err());
    }

    #[test]
    fn origin_outside_is_degenerate() {
        let s = ConvexShape::disk(1.0).translated(Point::new(2.0, 0.0));
        assert!(matches!(s.validate(), Err(ElasticaError::DegenerateShape(_))));
    }

    #[test]
    fn arc_length_inverts() {
        let s = ConvexShape::new(1.2, vec![0.0, 0.1, 0.02], vec![0.0, -0.05, 0.01]).unwrap();
        assert_relative_eq!(s.arc_length(TAU), s.perimeter(), epsilon = 1e-12);
        for &target in &[0.0, 0.5, 3.0, 7.0] {
            let t = s.angle_at_arc_length(target);
            assert_relative_eq!(s.arc_length(t), target, epsilon = 1e-12);
        }
    }

    #[test]
    fn transforms_compose() {
        let s = ellipse_like();
        let r = s.rotated(0.4);
        assert_relative_eq!(r.support(1.0), s.support(0.6), epsilon = 1e-14);
        let t = s.translated(Point::new(0.3, -0.2));
        assert_relative_eq!(t.support(0.5), s.support(0.5) + 0.3 * 0.5f64.cos() - 0.2 * 0.5f64.sin(), epsilon = 1e-14);
        assert_relative_eq!(t.centered().steiner_point().norm(), 0.0);
        assert_relative_eq!(s.scaled(2.0).area(), 4.0 * s.area(), epsilon = 1e-12);
    }

    #[test]
    fn diameter_is_max_width() {
        assert_relative_eq!(ConvexShape::disk(1.5).diameter(), 3.0, epsilon = 1e-12);
        // widths 2h(0) = 2.2 along x for h = 1 + 0.1 cos 2θ
        assert_relative_eq!(ellipse_like().diameter(), 2.2, epsilon = 1e-10);
    }
}
