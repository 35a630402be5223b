//! The energy `E_{p,λ}(Ω) = ∫_Ω dist^p(x, ∂Ω) dx + λ ∫_{∂Ω} κ² dH¹` and its disk oracles.

mod normal;
mod quadrature;

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ElasticaError, Result};
use crate::geometry::{ConvexDomain, ConvexShape, Point, SupportGrid, DEFAULT_GRID};

pub use normal::NormalProfile;
pub use quadrature::{gauss_legendre, gauss_legendre_unit};

/// Scan resolution of the support grid used for pointwise distances.
const DISTANCE_GRID: usize = 1024;

/// Discretisation of the average-distance integral.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvgScheme {
    /// Rays from the centroid with Gauss–Legendre nodes along each ray.
    #[default]
    Polar,
    /// One-dimensional integral over the normal angle using cut distances.
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_theta: usize,
    pub n_radial: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub scheme: AvgScheme,
    /// Normal-angle grid of [`AvgScheme::Normal`].
    pub n_normal: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_theta: 256,
            n_radial: 64,
            mc_samples: 1_000_000,
            seed: 42,
            scheme: AvgScheme::Polar,
            n_normal: 4096,
        }
    }
}

impl QuadratureConfig {
    pub fn with_scheme(mut self, scheme: AvgScheme) -> Self {
        self.scheme = scheme;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n_theta < 8 {
            return Err(ElasticaError::QuadratureUnderflow(format!(
                "n_theta = {} < 8",
                self.n_theta
            )));
        }
        if self.n_radial == 0 || self.mc_samples == 0 {
            return Err(ElasticaError::QuadratureUnderflow(
                "n_radial and mc_samples must be positive".into(),
            ));
        }
        if self.n_normal < 16 {
            return Err(ElasticaError::QuadratureUnderflow(format!(
                "n_normal = {} < 16",
                self.n_normal
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub p: f64,
    pub lambda: f64,
    pub avg_distance_term: f64,
    pub elastica_term: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    /// `{"p", "lambda", "avg", "elastica", "total", "config"}`.
    pub fn report_json(&self, q: &QuadratureConfig) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "lambda": self.lambda,
            "avg": self.avg_distance_term,
            "elastica": self.elastica_term,
            "total": self.total,
            "config": q,
        })
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(ElasticaError::InvalidParameter(format!("p must be ≥ 1, got {p}")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ElasticaError::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(())
}

/// `∫_{∂Ω} κ² dH¹ = ∫₀^{2π} dθ / (h + h″)`, periodic trapezoid on the validation grid.
pub fn elastica_term(shape: &ConvexShape) -> Result<f64> {
    shape.validate()?;
    let n = DEFAULT_GRID;
    let sum: f64 = (0..n)
        .map(|i| 1.0 / shape.radius_of_curvature(TAU * i as f64 / n as f64))
        .sum();
    Ok(sum * TAU / n as f64)
}

/// Gradient of [`elastica_term`] in the `[a0, a1..aK, b1..bK]` layout:
/// `∂/∂a_k = −(1 − k²) ∫ cos kθ / ρ² dθ`, likewise with `sin` for `b_k`.
pub fn elastica_gradient(shape: &ConvexShape) -> Result<Vec<f64>> {
    shape.validate()?;
    let k_max = shape.order();
    let n = DEFAULT_GRID;
    let step = TAU / n as f64;
    let mut grad = vec![0.0; 1 + 2 * k_max];
    for i in 0..n {
        let t = step * i as f64;
        let r = shape.radius_of_curvature(t);
        let w = -step / (r * r);
        grad[0] += w;
        for k in 1..=k_max {
            let f = 1.0 - (k * k) as f64;
            let (s, c) = (k as f64 * t).sin_cos();
            grad[k] += w * f * c;
            grad[k_max + k] += w * f * s;
        }
    }
    Ok(grad)
}

/// `∫_Ω dist^p(x, ∂Ω) dx` with the scheme selected in `q`.
pub fn average_distance_term(shape: &ConvexShape, p: f64, q: &QuadratureConfig) -> Result<f64> {
    check_p(p)?;
    q.check()?;
    shape.validate()?;
    Ok(match q.scheme {
        AvgScheme::Polar => polar_average_distance(shape, p, q.n_theta, q.n_radial),
        AvgScheme::Normal => NormalProfile::new(shape, q.n_normal).integral(p),
    })
}

/// Gradient of the average-distance term from the normal-coordinate profile, in the
/// `[a0, a1..aK, b1..bK]` layout.
pub fn average_distance_gradient(shape: &ConvexShape, p: f64, n_normal: usize) -> Result<Vec<f64>> {
    check_p(p)?;
    shape.validate()?;
    let prof = NormalProfile::new(shape, n_normal);
    let w = prof.sensitivity(p);
    let step = prof.step();
    let k_max = shape.order();
    let mut grad = vec![0.0; 1 + 2 * k_max];
    for (&t, &wi) in prof.theta.iter().zip(&w) {
        grad[0] += wi * step;
        for k in 1..=k_max {
            let (s, c) = (k as f64 * t).sin_cos();
            grad[k] += wi * c * step;
            grad[k_max + k] += wi * s * step;
        }
    }
    Ok(grad)
}

fn polar_average_distance(shape: &ConvexShape, p: f64, n_theta: usize, n_radial: usize) -> f64 {
    polar_quadrature(&SupportGrid::new(shape, DISTANCE_GRID), p, n_theta, n_radial)
}

/// `∫_D dist^p(x, ∂D) dx` by polar quadrature about the domain's anchor: `n_theta` uniform
/// rays, `n_radial` Gauss–Legendre nodes per ray.
pub fn polar_quadrature<D: ConvexDomain>(domain: &D, p: f64, n_theta: usize, n_radial: usize) -> f64 {
    let grid = domain;
    let centre = grid.anchor();
    let (nodes, weights) = gauss_legendre_unit(n_radial);
    let dphi = TAU / n_theta as f64;
    let rays: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|j| {
            let phi = dphi * j as f64;
            let dir = Point::new(phi.cos(), phi.sin());
            let extent = grid.ray_extent(phi);
            let mut acc = 0.0;
            for (&x, &w) in nodes.iter().zip(&weights) {
                let r = x * extent;
                let d = grid.signed_distance(centre + dir * r).max(0.0);
                acc += w * d.powf(p) * r;
            }
            acc * extent
        })
        .collect();
    rays.iter().sum::<f64>() * dphi
}

/// Rejection-sampling oracle for `∫_Ω dist^p`: uniform samples in the bounding box, points
/// outside the shape contribute zero.
pub fn monte_carlo_average_distance(
    shape: &ConvexShape,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_p(p)?;
    shape.validate()?;
    if samples < 2 {
        return Err(ElasticaError::QuadratureUnderflow("need at least two samples".into()));
    }
    let grid = SupportGrid::new(shape, DISTANCE_GRID);
    let (lo, hi) = grid.bounding_box();
    let box_area = (hi.x - lo.x) * (hi.y - lo.y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let x = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        let d = grid.signed_distance(x);
        if d > 0.0 {
            let v = d.powf(p);
            sum += v;
            sum_sq += v * v;
        }
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate {
        value: box_area * mean,
        std_error: box_area * (var / n).sqrt(),
        samples,
    })
}

pub fn total_energy(
    shape: &ConvexShape,
    p: f64,
    lambda: f64,
    q: &QuadratureConfig,
) -> Result<EnergyBreakdown> {
    check_lambda(lambda)?;
    let avg = average_distance_term(shape, p, q)?;
    let el = elastica_term(shape)?;
    Ok(EnergyBreakdown {
        p,
        lambda,
        avg_distance_term: avg,
        elastica_term: el,
        total: avg + lambda * el,
    })
}

/// `E_{p,λ}` of a disk of radius `R`: `2πR^{p+2}/((p+1)(p+2)) + 2πλ/R`.
pub fn disk_energy(r: f64, p: f64, lambda: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(ElasticaError::NonpositiveRadius(r));
    }
    Ok(2.0 * PI * r.powf(p + 2.0) / ((p + 1.0) * (p + 2.0)) + 2.0 * PI * lambda / r)
}

/// Minimiser of [`disk_energy`] over `R`: `(λ(p+1))^{1/(p+3)}`.
pub fn optimal_disk_radius(p: f64, lambda: f64) -> f64 {
    (lambda * (p + 1.0)).powf(1.0 / (p + 3.0))
}
