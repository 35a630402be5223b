//! The four-piece competitor `Ω_ε` built around a probed pair of boundary parameters, and
//! numerical checks of the energy comparison it supports.

mod field;
mod frame;

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::bounds::{constant_c1, constant_c2};
use crate::energy::{gauss_legendre_unit, polar_quadrature};
use crate::error::{ElasticaError, Result};
use crate::geometry::{cross, hausdorff_distance, BoundaryCurve, ConvexPolygon, Point};

pub use field::{v_norm_check, vector_field_jet, vector_field_v, FieldJet, VNormReport};
pub use frame::{canonical_frame, check_frame, find_tangent_times, CanonicalFrame, FRAME_TOL};

/// Parameters shared by every ε of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompetitorParams {
    pub p: f64,
    pub lambda: f64,
    /// Rays and radial nodes of the polygon quadrature used for the average-distance term.
    pub n_theta: usize,
    pub n_radial: usize,
    /// Extra competitor samples placed inside `[0, ε]`.
    pub homothety_samples: usize,
}

impl Default for CompetitorParams {
    fn default() -> Self {
        Self {
            p: 1.0,
            lambda: 1.0,
            n_theta: 256,
            n_radial: 64,
            homothety_samples: 32,
        }
    }
}

/// Energy terms of the original curve, evaluated once per sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Baseline {
    pub avg: f64,
    pub elastica: f64,
    pub energy: f64,
}

impl Baseline {
    pub fn of_curve(curve: &BoundaryCurve, params: &CompetitorParams) -> Result<Self> {
        let poly = ConvexPolygon::new(curve.vertices().to_vec(), 1e-9)?;
        let avg = polar_quadrature(&poly, params.p, params.n_theta, params.n_radial);
        let knots = curve.cumulative_arclength();
        let elastica = integrate(knots, 0.0, curve.total_length(), |t| {
            let e = curve.eval(t);
            elastica_density(e.tangent, e.second_derivative())
        });
        Ok(Self {
            avg,
            elastica,
            energy: avg + params.lambda * elastica,
        })
    }
}

/// Pass/fail of the individual claims at one ε.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompetitorChecks {
    /// `|γ(ε)_y − ε| ≤ ε^{3/2}√(E/λ)`.
    pub gamma_eps_y: bool,
    /// `d_H(∂Ω_ε, ∂Ω) ≤ 2ε` up to the sampling tolerance.
    pub hausdorff: bool,
    /// Translation piece contributes nothing to the elastica difference.
    pub translation_piece: bool,
    /// Homothety piece: original minus competitor `≥ M²ε/2`.
    pub homothety_piece: bool,
    /// Stretch factor `a ≤ ε^{3/2}√(E/λ)/(γ(0)_x − γ(t₊)_x)`.
    pub stretch_factor: bool,
    /// `|Δ₄| ≤ ((1+a)² − 1)·K₄` with `a` the bound above.
    pub stretch_piece: bool,
    /// `ΔF ≤ ε·p(C₁+1)^{p−1}πC₁²/2 + (2ε)^{p+1}π(C₁+1)`.
    pub average_distance: bool,
}

impl CompetitorChecks {
    pub fn all(&self) -> bool {
        self.gamma_eps_y
            && self.hausdorff
            && self.translation_piece
            && self.homothety_piece
            && self.stretch_factor
            && self.stretch_piece
            && self.average_distance
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompetitorResult {
    pub eps: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub t_minus: f64,
    pub t_bot: f64,
    pub t_plus: f64,
    pub gamma_eps_y: f64,
    pub gamma0_x: f64,
    pub stretch: f64,
    pub stretch_bound: f64,
    #[serde(skip)]
    pub competitor_curve: BoundaryCurve,
    pub delta_avg: f64,
    pub delta_elastica: f64,
    #[serde(rename = "f_rhs")]
    pub f_bound_rhs: f64,
    /// `ε(C₂ − M²/2)`, the linear part of the elastica estimate.
    pub k_bound_rhs: f64,
    pub hausdorff_gap: f64,
    pub hausdorff_tol: f64,
    /// Elastica of the four pieces of the original and of the competitor.
    pub piece_original: [f64; 4],
    pub piece_competitor: [f64; 4],
    pub piece_deltas: [f64; 4],
    pub checks: CompetitorChecks,
}

/// `κ²|c′|` from the first two derivatives of any regular parameterisation.
fn elastica_density(c1: Point, c2: Point) -> f64 {
    let k = cross(c1, c2);
    let s = c1.norm();
    k * k / s.powi(5)
}

/// `∫_a^b f` with a 5-point Gauss rule on every knot interval inside `[a, b]`.
fn integrate<F: Fn(f64) -> f64>(knots: &[f64], a: f64, b: f64, f: F) -> f64 {
    let (x, w) = gauss_legendre_unit(5);
    let mut cuts = vec![a];
    let start = knots.partition_point(|&k| k <= a);
    cuts.extend(knots[start..].iter().copied().take_while(|&k| k < b));
    cuts.push(b);
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let h = hi - lo;
        if h <= 0.0 {
            continue;
        }
        total += h * x.iter().zip(&w).map(|(x, w)| w * f(lo + h * x)).sum::<f64>();
    }
    total
}

/// The piecewise map of the construction, evaluated with its first two derivatives.
struct Construction<'a> {
    curve: &'a BoundaryCurve,
    eps: f64,
    g: f64,
    times: (f64, f64, f64),
    x_plus: f64,
    stretch: f64,
}

impl Construction<'_> {
    fn bounds(&self) -> [(f64, f64); 4] {
        let (tm, _, tp) = self.times;
        [(0.0, self.eps), (self.eps, tm), (tm, tp), (tp, self.curve.total_length())]
    }

    /// Piece containing `t`; junctions belong to the later piece.
    fn piece_of(&self, t: f64) -> usize {
        let (tm, _, tp) = self.times;
        if t < self.eps {
            0
        } else if t < tm {
            1
        } else if t < tp {
            2
        } else {
            3
        }
    }

    fn original(&self, t: f64) -> (Point, Point, Point) {
        let e = self.curve.eval(t);
        (e.point, e.tangent, e.second_derivative())
    }

    fn jet(&self, piece: usize, t: f64) -> (Point, Point, Point) {
        let (c, c1, c2) = self.original(t);
        match piece {
            0 => (c * 2.0, c1 * 2.0, c2 * 2.0),
            1 => (c + Point::new(0.0, self.g), c1, c2),
            2 => {
                let (tm, tb, tp) = self.times;
                let v = vector_field_jet(t.clamp(tm, tp), tm, tb, tp).expect("ordered tangent times");
                (c + v.v * self.g, c1 + v.dv * self.g, c2 + v.d2v * self.g)
            }
            _ => {
                let a = self.stretch;
                (
                    Point::new(c.x * (1.0 + a) - self.x_plus * a, c.y),
                    Point::new(c1.x * (1.0 + a), c1.y),
                    Point::new(c2.x * (1.0 + a), c2.y),
                )
            }
        }
    }
}

/// Builds `Ω_ε` from a curve already in its canonical frame for the pair `(0, ε)`.
pub fn build_competitor(canonical: &BoundaryCurve, eps: f64, params: &CompetitorParams) -> Result<CompetitorResult> {
    let baseline = Baseline::of_curve(canonical, params)?;
    build_competitor_with(canonical, eps, params, &baseline)
}

/// As [`build_competitor`], reusing precomputed energy terms of the original.
pub fn build_competitor_with(
    canonical: &BoundaryCurve,
    eps: f64,
    params: &CompetitorParams,
    baseline: &Baseline,
) -> Result<CompetitorResult> {
    check_frame(canonical, eps)?;
    let total = canonical.total_length();
    let (tm, tb, tp) = find_tangent_times(canonical)?;
    if !(eps < tm) {
        return Err(ElasticaError::EpsilonTooLarge {
            eps,
            reason: format!("ε must precede t₋ = {tm}"),
        });
    }
    let g0 = canonical.eval(0.0);
    let ge = canonical.eval(eps);
    let (x0, g) = (g0.point.x, ge.point.y);
    if !(g > x0 && x0 > 0.0) {
        return Err(ElasticaError::EpsilonTooLarge {
            eps,
            reason: format!("need γ(ε)_y > γ(0)_x > 0, got γ(ε)_y = {g}, γ(0)_x = {x0}"),
        });
    }
    let x_plus = canonical.eval(tp).point.x;
    let stretch = x0 / (x0 - x_plus);
    let m = (ge.tangent - g0.tangent).norm() / eps;
    let cons = Construction {
        curve: canonical,
        eps,
        g,
        times: (tm, tb, tp),
        x_plus,
        stretch,
    };

    // piecewise elastica, same density formula for both curves
    let knots = canonical.cumulative_arclength();
    let mut piece_original = [0.0; 4];
    let mut piece_competitor = [0.0; 4];
    for (k, &(a, b)) in cons.bounds().iter().enumerate() {
        piece_original[k] = integrate(knots, a, b, |t| {
            let (_, c1, c2) = cons.original(t);
            elastica_density(c1, c2)
        });
        piece_competitor[k] = integrate(knots, a, b, |t| {
            let (_, c1, c2) = cons.jet(k, t);
            elastica_density(c1, c2)
        });
    }
    let piece_deltas: [f64; 4] = std::array::from_fn(|k| piece_competitor[k] - piece_original[k]);

    let competitor_curve = sample_competitor(&cons, params.homothety_samples)?;
    let hausdorff_gap = hausdorff_distance(canonical, &competitor_curve);
    // chord sagitta bound of the coarser sampling
    let max_seg = knots.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let kmax = canonical.curvature_samples().iter().fold(0.0f64, |a, &k| a.max(k.abs()));
    let hausdorff_tol = max_seg * max_seg * kmax + 1e-12 * total;

    let poly = ConvexPolygon::new(competitor_curve.vertices().to_vec(), 1e-9).map_err(|e| {
        ElasticaError::EpsilonTooLarge {
            eps,
            reason: format!("competitor polygon rejected: {e}"),
        }
    })?;
    let avg = polar_quadrature(&poly, params.p, params.n_theta, params.n_radial);
    let delta_avg = avg - baseline.avg;
    let delta_elastica: f64 = piece_deltas.iter().sum();

    let (p, lambda) = (params.p, params.lambda);
    let c1 = constant_c1(p, lambda);
    let f_bound_rhs = eps * p * (c1 + 1.0).powf(p - 1.0) * PI * c1 * c1 / 2.0
        + (2.0 * eps).powf(p + 1.0) * PI * (c1 + 1.0);
    let k_bound_rhs = eps * (constant_c2(p, lambda) - m * m / 2.0);

    let e_over_l = baseline.energy / lambda;
    let stretch_bound = eps.powf(1.5) * e_over_l.sqrt() / (x0 - x_plus);
    let k4 = piece_original[3];
    let checks = CompetitorChecks {
        gamma_eps_y: (g - eps).abs() <= eps.powf(1.5) * e_over_l.sqrt(),
        hausdorff: hausdorff_gap <= 2.0 * eps + hausdorff_tol,
        translation_piece: piece_deltas[1].abs() <= 1e-12,
        homothety_piece: piece_original[0] - piece_competitor[0] >= m * m * eps / 2.0 - 1e-9 * eps,
        stretch_factor: stretch <= stretch_bound,
        stretch_piece: piece_deltas[3].abs()
            <= ((1.0 + stretch_bound).powi(2) - 1.0) * k4 * (1.0 + 1e-12) + 1e-15,
        average_distance: delta_avg <= f_bound_rhs,
    };

    Ok(CompetitorResult {
        eps,
        m,
        t_minus: tm,
        t_bot: tb,
        t_plus: tp,
        gamma_eps_y: g,
        gamma0_x: x0,
        stretch,
        stretch_bound,
        competitor_curve,
        delta_avg,
        delta_elastica,
        f_bound_rhs,
        k_bound_rhs,
        hausdorff_gap,
        hausdorff_tol,
        piece_original,
        piece_competitor,
        piece_deltas,
        checks,
    })
}

/// Samples the competitor at the original knots, densely inside `[0, ε]` and at every
/// junction; arc length is accumulated from `|c′|`.
fn sample_competitor(cons: &Construction, homothety_samples: usize) -> Result<BoundaryCurve> {
    let curve = cons.curve;
    let total = curve.total_length();
    let (tm, tb, tp) = cons.times;
    let mut ts: Vec<f64> = curve.cumulative_arclength()[..curve.len()].to_vec();
    let n1 = homothety_samples.max(2);
    ts.extend((0..n1).map(|i| cons.eps * i as f64 / n1 as f64));
    ts.extend([cons.eps, tm, tb, tp]);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * total.max(1.0));

    let (gx, gw) = gauss_legendre_unit(5);
    let mut points = Vec::with_capacity(ts.len() + 1);
    let mut tangents = Vec::with_capacity(ts.len() + 1);
    let mut curvature = Vec::with_capacity(ts.len() + 1);
    let mut arclength = Vec::with_capacity(ts.len() + 1);
    let mut s = 0.0;
    for (i, &t) in ts.iter().enumerate() {
        let (c, c1, c2) = cons.jet(cons.piece_of(t), t);
        let speed = c1.norm();
        points.push(c);
        tangents.push(c1 / speed);
        curvature.push(cross(c1, c2) / speed.powi(3));
        arclength.push(s);
        let next = ts.get(i + 1).copied().unwrap_or(total);
        let h = next - t;
        let piece = cons.piece_of(0.5 * (t + next));
        s += h * gx.iter().zip(&gw).map(|(x, w)| w * cons.jet(piece, t + h * x).1.norm()).sum::<f64>();
    }
    let (end, _, _) = cons.jet(3, total);
    let gap = (end - points[0]).norm();
    if gap > 1e-9 * total {
        return Err(ElasticaError::EpsilonTooLarge {
            eps: cons.eps,
            reason: format!("competitor does not close (gap {gap:e})"),
        });
    }
    if let Some(k) = curvature.iter().copied().find(|&k| k < -1e-9) {
        return Err(ElasticaError::EpsilonTooLarge {
            eps: cons.eps,
            reason: format!("competitor loses convexity (curvature {k:e})"),
        });
    }
    points.push(points[0]);
    tangents.push(tangents[0]);
    curvature.push(curvature[0]);
    arclength.push(s);
    let out = BoundaryCurve::from_parts(points, tangents, curvature, arclength)?;
    if (out.total_turning() - 2.0 * PI).abs() > 1e-3 {
        return Err(ElasticaError::EpsilonTooLarge {
            eps: cons.eps,
            reason: format!("competitor total turning {}", out.total_turning()),
        });
    }
    Ok(out)
}

/// Outcome of one ε of a sweep.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SweepRow {
    Built(Box<CompetitorResult>),
    Failed { eps: f64, error: String },
}

/// Least-squares fit `ΔK(ε) ≈ aε + bε^{3/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElasticaFit {
    pub linear: f64,
    pub three_halves: f64,
    pub m_max: f64,
    /// `1.5·(C₂ − M²/2)` with the largest measured `M`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyInequalityReport {
    pub p: f64,
    pub lambda: f64,
    pub t1: f64,
    pub baseline: Baseline,
    pub rows: Vec<SweepRow>,
    pub v_norm: Option<VNormReport>,
    pub fit: ElasticaFit,
}

impl EnergyInequalityReport {
    pub fn built(&self) -> impl Iterator<Item = &CompetitorResult> {
        self.rows.iter().filter_map(|r| match r {
            SweepRow::Built(b) => Some(b.as_ref()),
            SweepRow::Failed { .. } => None,
        })
    }

    pub fn all_pass(&self) -> bool {
        self.fit.pass && self.rows.iter().all(|r| matches!(r, SweepRow::Built(b) if b.checks.all()))
    }
}

pub const SLACK_FACTOR: f64 = 1.5;

fn fit_elastica(rows: &[&CompetitorResult], p: f64, lambda: f64) -> Result<ElasticaFit> {
    if rows.len() < 4 {
        return Err(ElasticaError::FitUnstable(format!(
            "need at least 4 successful ε values, got {}",
            rows.len()
        )));
    }
    let mut ata = Matrix2::zeros();
    let mut atb = Vector2::zeros();
    for r in rows {
        let row = Vector2::new(r.eps, r.eps.powf(1.5));
        ata += row * row.transpose();
        atb += row * r.delta_elastica;
    }
    let scale = ata.norm();
    if ata.determinant().abs() <= 1e-14 * scale * scale {
        return Err(ElasticaError::FitUnstable("ε values too close to separate ε and ε^{3/2}".into()));
    }
    let sol = ata.lu().solve(&atb).ok_or_else(|| ElasticaError::FitUnstable("singular normal equations".into()))?;
    let m_max = rows.iter().map(|r| r.m).fold(0.0, f64::max);
    let base = constant_c2(p, lambda) - m_max * m_max / 2.0;
    let bound = if base >= 0.0 { SLACK_FACTOR * base } else { base / SLACK_FACTOR };
    Ok(ElasticaFit {
        linear: sol[0],
        three_halves: sol[1],
        m_max,
        bound,
        pass: sol[0] <= bound,
    })
}

/// Runs the construction for every ε at the probe `t1` (default: the sample of largest
/// curvature) and fits the elastica difference.
pub fn verify_energy_inequalities(
    curve: &BoundaryCurve,
    eps_list: &[f64],
    params: &CompetitorParams,
    t1: Option<f64>,
) -> Result<EnergyInequalityReport> {
    if eps_list.len() < 4 {
        return Err(ElasticaError::FitUnstable(format!(
            "need at least 4 ε values, got {}",
            eps_list.len()
        )));
    }
    if let Some(&bad) = eps_list.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        return Err(ElasticaError::InvalidParameter(format!("ε must be positive, got {bad}")));
    }
    let t1 = t1.unwrap_or_else(|| curve.cumulative_arclength()[curve.argmax_curvature()]);
    let baseline = Baseline::of_curve(curve, params)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    let mut v_norm = None;
    for &eps in eps_list {
        let built = canonical_frame(curve, t1, t1 + eps)
            .and_then(|(_, canon)| build_competitor_with(&canon, eps, params, &baseline));
        rows.push(match built {
            Ok(r) => {
                if v_norm.is_none() {
                    v_norm = v_norm_check(r.t_minus, r.t_bot, r.t_plus, params.lambda).ok();
                }
                SweepRow::Built(Box::new(r))
            }
            Err(e) => SweepRow::Failed { eps, error: e.to_string() },
        });
    }
    let built: Vec<&CompetitorResult> = rows
        .iter()
        .filter_map(|r| match r {
            SweepRow::Built(b) => Some(b.as_ref()),
            SweepRow::Failed { .. } => None,
        })
        .collect();
    let fit = fit_elastica(&built, params.p, params.lambda)?;
    Ok(EnergyInequalityReport {
        p: params.p,
        lambda: params.lambda,
        t1,
        baseline,
        rows,
        v_norm,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexShape;
    use approx::assert_relative_eq;

    const EPS: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];

    fn circle() -> BoundaryCurve {
        BoundaryCurve::from_shape(&ConvexShape::disk(1.0), 8192).unwrap()
    }

    #[test]
    fn circle_competitor_pieces() {
        let c = circle();
        let eps = 0.01;
        let (_, canon) = canonical_frame(&c, 0.0, eps).unwrap();
        let r = build_competitor(&canon, eps, &CompetitorParams::default()).unwrap();
        assert!(r.checks.all(), "{:?}", r.checks);
        assert!(r.hausdorff_gap <= 0.02);
        assert_eq!(r.piece_deltas[1], 0.0);
        // κ ≡ 1: original piece ε, competitor ε/2
        assert_relative_eq!(r.piece_original[0], eps, max_relative = 1e-9);
        assert_relative_eq!(r.piece_competitor[0], eps / 2.0, max_relative = 1e-9);
        assert_relative_eq!(r.m, 2.0 * (eps / 2.0).sin() / eps, max_relative = 1e-9);
        assert_relative_eq!(r.gamma_eps_y, eps.sin(), epsilon = 1e-10);
        assert_relative_eq!(r.gamma0_x, 1.0 - eps.cos(), epsilon = 1e-10);
        assert!(r.competitor_curve.validate(1e-6).is_ok());
    }

    #[test]
    fn homothety_piece_halves_curvature() {
        let s = ConvexShape::new(1.0, vec![0.0, 0.1], vec![0.0, 0.02]).unwrap();
        let c = BoundaryCurve::from_shape(&s, 8192).unwrap();
        let eps = 0.005;
        let t1 = c.cumulative_arclength()[c.argmax_curvature()];
        let (_, canon) = canonical_frame(&c, t1, t1 + eps).unwrap();
        let r = build_competitor(&canon, eps, &CompetitorParams::default()).unwrap();
        assert!(r.checks.all(), "{:?}", r.checks);
        let comp = &r.competitor_curve;
        // first samples lie in [0, ε] at parameter t with arc length 2t
        for i in 1..10 {
            let t = eps * i as f64 / 32.0;
            let e = canon.eval(t);
            let sc = comp.eval(2.0 * t);
            assert_relative_eq!(sc.curvature, e.curvature / 2.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn sweep_on_unit_circle() {
        let rep = verify_energy_inequalities(&circle(), &EPS, &CompetitorParams::default(), None).unwrap();
        assert!(rep.all_pass(), "{}", serde_json::to_string_pretty(&rep).unwrap());
        assert_eq!(rep.built().count(), 4);
        assert!(rep.fit.linear <= rep.fit.bound);
        let v = rep.v_norm.unwrap();
        assert!(v.pass);
    }

    #[test]
    fn large_eps_fails_per_row() {
        let c = circle();
        let rep = verify_energy_inequalities(&c, &[1.7, 0.01, 0.005, 0.004, 0.0025], &CompetitorParams::default(), None)
            .unwrap();
        assert!(matches!(rep.rows[0], SweepRow::Failed { .. }));
        assert_eq!(rep.built().count(), 4);
    }

    #[test]
    fn too_few_eps_is_unstable() {
        let e = verify_energy_inequalities(&circle(), &[0.01, 0.005, 0.0025], &CompetitorParams::default(), None);
        assert!(matches!(e, Err(ElasticaError::FitUnstable(_))));
    }

    #[test]
    fn unframed_curve_is_rejected() {
        let c = circle().shifted(0.3);
        let e = build_competitor(&c, 0.01, &CompetitorParams::default());
        assert!(matches!(e, Err(ElasticaError::FrameMissing(_))));
    }
}
