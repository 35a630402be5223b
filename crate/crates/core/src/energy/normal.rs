//! Average-distance integral in normal coordinates `x = γ(θ) − t·u(θ)`.
//!
//! For a convex body the fibre over `θ` is the segment `0 ≤ t ≤ τ(θ)` where `τ` is the cut
//! distance, and the area element is `(ρ − t) dθ dt`. Hence
//! `∫_Ω dist^p = ∫ [ρτ^{p+1}/(p+1) − τ^{p+2}/(p+2)] dθ`.

use std::f64::consts::TAU;

use crate::geometry::{golden_section_min, ConvexShape};

/// Radius of curvature and cut distance on a uniform normal-angle grid.
#[derive(Clone, Debug)]
pub struct NormalProfile {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub tau: Vec<f64>,
}

impl NormalProfile {
    pub fn new(shape: &ConvexShape, n: usize) -> Self {
        let step = TAU / n as f64;
        let theta: Vec<f64> = (0..n).map(|i| step * i as f64).collect();
        let jets: Vec<_> = theta.iter().map(|&t| shape.jet(t)).collect();
        let h: Vec<f64> = jets.iter().map(|j| j.h).collect();
        let rho: Vec<f64> = jets.iter().map(|j| j.radius_of_curvature()).collect();
        let (sin_d, cos_d): (Vec<f64>, Vec<f64>) = theta.iter().map(|t| t.sin_cos()).unzip();
        let inv_den: Vec<f64> = cos_d.iter().map(|c| 1.0 / (1.0 - c)).collect();
        let mut g = vec![0.0; n];
        let mut tau = Vec::with_capacity(n);
        for i in 0..n {
            let (hi, dhi) = (h[i], jets[i].dh);
            g[0] = rho[i];
            // h shifted so that hs[m] = h[(i + m) mod n]
            let hs = h[i..].iter().chain(&h[..i]);
            for (m, hj) in hs.enumerate().skip(1) {
                g[m] = (hj - hi * cos_d[m] - dhi * sin_d[m]) * inv_den[m];
            }
            let exact = |d: f64| {
                let (s, c) = d.sin_cos();
                (shape.support(theta[i] + d) - hi * c - dhi * s) / (1.0 - c)
            };
            tau.push(cut_distance(&g, step, rho[i], exact));
        }
        Self { theta, rho, tau }
    }

    pub fn step(&self) -> f64 {
        TAU / self.theta.len() as f64
    }

    /// `∫_Ω dist^p` by the periodic trapezoid rule.
    pub fn integral(&self, p: f64) -> f64 {
        let terms: Vec<f64> = self
            .rho
            .iter()
            .zip(&self.tau)
            .map(|(&r, &t)| r * t.powf(p + 1.0) / (p + 1.0) - t.powf(p + 2.0) / (p + 2.0))
            .collect();
        terms.iter().sum::<f64>() * self.step()
    }

    /// Shape-derivative density: perturbing `h` by `δh` changes the integral by
    /// `∫ δh(θ)·w(θ) dθ` with `w = ρτ^p − pτ^{p+1}/(p+1)`.
    pub fn sensitivity(&self, p: f64) -> Vec<f64> {
        self.rho
            .iter()
            .zip(&self.tau)
            .map(|(&r, &t)| r * t.powf(p) - p * t.powf(p + 1.0) / (p + 1.0))
            .collect()
    }
}

/// `min(ρ, inf_ψ g)` from the sampled quotient `g[m]` at offsets `m·step`; grid-local minima
/// that could hide a lower continuous minimum are refined with `exact`.
fn cut_distance<F: Fn(f64) -> f64>(g: &[f64], step: f64, rho: f64, exact: F) -> f64 {
    let n = g.len();
    let mut candidates: Vec<(f64, f64, usize)> = Vec::new();
    for m in 1..n {
        let (l, r) = (g[m - 1], if m + 1 < n { g[m + 1] } else { g[0] });
        if g[m] <= l && g[m] <= r {
            let curvature = (l - 2.0 * g[m] + r).abs();
            candidates.push((g[m] - 0.25 * curvature, g[m], m));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = rho;
    for &(_, gm, _) in &candidates {
        best = best.min(gm);
    }
    for &(lower, _, m) in &candidates {
        if lower > best {
            break;
        }
        let centre = step * m as f64;
        let lo = (centre - step).max(0.25 * step);
        let hi = (centre + step).min(TAU - 0.25 * step);
        let (_, v) = golden_section_min(&exact, lo, hi, 1e-10);
        best = best.min(v);
    }
    best.max(0.0)
}
