//! Projected descent of `E_{p,λ}` over truncated support-function series.

use std::f64::consts::PI;
use std::io::Write;

use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use crate::energy::{
    average_distance_gradient, elastica_gradient, optimal_disk_radius, total_energy, AvgScheme,
    EnergyBreakdown, QuadratureConfig,
};
use crate::error::{ElasticaError, Result};
use crate::geometry::{ConvexShape, DEFAULT_GRID, DEFAULT_K_MAX};

/// Damping factor `φ` of [`project_convex`].
pub const DAMPING: f64 = 0.9;
/// Maximum number of dampings before [`ElasticaError::ProjectionFailed`].
pub const MAX_DAMPINGS: usize = 200;
const ARMIJO_SHRINK: f64 = 0.5;
const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    ProjectedGradient,
    SimplexSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub p: f64,
    pub lambda: f64,
    pub k_max: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub tol_grad: f64,
    pub tol_energy: f64,
    pub method: Method,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            p: 1.0,
            lambda: 1.0,
            k_max: DEFAULT_K_MAX,
            max_iters: 200,
            step_init: 1.0,
            tol_grad: 1e-7,
            tol_energy: 1e-12,
            method: Method::ProjectedGradient,
            seed: 42,
            quadrature: QuadratureConfig {
                scheme: AvgScheme::Normal,
                n_normal: 1024,
                ..QuadratureConfig::default()
            },
        }
    }
}

impl OptimizerConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.tol_grad > 0.0 && self.tol_energy > 0.0 && self.step_init > 0.0) {
            return Err(ElasticaError::InvalidParameter(
                "tolerances and initial step must be positive".into(),
            ));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(ElasticaError::InvalidParameter(format!("p must be ≥ 1, got {}", self.p)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(ElasticaError::InvalidParameter(format!("lambda must be > 0, got {}", self.lambda)));
        }
        Ok(())
    }

    /// Diameter floor below which trial steps are rejected: half of `2πλ/(1+πλ)`.
    pub fn collapse_floor(&self) -> f64 {
        PI * self.lambda / (1.0 + PI * self.lambda)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub avg_term: f64,
    pub elastica_term: f64,
    pub grad_norm: f64,
    #[serde(rename = "min_curv_radius")]
    pub min_curvature_radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GradientTolerance,
    EnergyTolerance,
    MaxIterations,
    LineSearchFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizationTrace {
    pub rows: Vec<TraceRow>,
    pub final_shape: ConvexShape,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// Set when the run ended on [`ElasticaError::LineSearchFailed`].
    pub error: Option<String>,
}

impl OptimizationTrace {
    pub fn final_energy(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.energy)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r).map_err(|e| ElasticaError::Io(e.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Feasible shape closest in spirit to `coeffs`: while `h + h″ < δ_conv` somewhere, every
/// mode of order `k` is multiplied by `φ^k`. Feasible input is returned unchanged.
pub fn project_convex(coeffs: &[f64]) -> Result<ConvexShape> {
    let mut shape = ConvexShape::from_coeffs(coeffs)?;
    if shape.a0() <= 0.0 {
        return Err(ElasticaError::DegenerateShape(format!(
            "mean support value {} is not positive",
            shape.a0()
        )));
    }
    let feasible = |s: &ConvexShape| s.min_radius_of_curvature(DEFAULT_GRID) >= s.convexity_floor();
    for _ in 0..MAX_DAMPINGS {
        if feasible(&shape) {
            return Ok(shape);
        }
        let damp = |c: &[f64]| -> Vec<f64> {
            c.iter().enumerate().map(|(i, a)| a * DAMPING.powi(i as i32 + 1)).collect()
        };
        shape = ConvexShape::new(shape.a0(), damp(shape.cos_coeffs()), damp(shape.sin_coeffs()))?;
    }
    if feasible(&shape) {
        return Ok(shape);
    }
    Err(ElasticaError::ProjectionFailed(MAX_DAMPINGS))
}

/// `∇E` in coefficient space, analytic in both terms.
pub fn gradient(shape: &ConvexShape, p: f64, lambda: f64, q: &QuadratureConfig) -> Result<Vec<f64>> {
    let avg = average_distance_gradient(shape, p, q.n_normal)?;
    let el = elastica_gradient(shape)?;
    Ok(avg.iter().zip(&el).map(|(a, e)| a + lambda * e).collect())
}

/// Order of each entry of the flat coefficient vector.
fn mode_orders(k: usize) -> impl Iterator<Item = f64> {
    std::iter::once(0.0).chain((1..=k).chain(1..=k).map(|k| k as f64))
}

struct Evaluator<'a> {
    config: &'a OptimizerConfig,
}

impl Evaluator<'_> {
    fn energy(&self, shape: &ConvexShape) -> Result<EnergyBreakdown> {
        total_energy(shape, self.config.p, self.config.lambda, &self.config.quadrature)
    }

    fn row(&self, iter: usize, shape: &ConvexShape, e: &EnergyBreakdown, grad_norm: f64) -> TraceRow {
        TraceRow {
            iter,
            energy: e.total,
            avg_term: e.avg_distance_term,
            elastica_term: e.elastica_term,
            grad_norm,
            min_curvature_radius: shape.min_radius_of_curvature(DEFAULT_GRID),
        }
    }

    /// Energy of an admissible trial point, `None` if it leaves the class.
    fn trial(&self, coeffs: &[f64]) -> Option<(ConvexShape, EnergyBreakdown)> {
        let shape = project_convex(coeffs).ok()?;
        if shape.diameter() < self.config.collapse_floor() {
            return None;
        }
        let e = self.energy(&shape).ok()?;
        e.total.is_finite().then_some((shape, e))
    }
}

impl CostFunction for Evaluator<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        Ok(self.trial(x).map_or(f64::INFINITY, |(_, e)| e.total))
    }
}

fn simplex_search(
    eval: &Evaluator,
    start: &[f64],
    scale: f64,
    iters: usize,
) -> Option<(ConvexShape, EnergyBreakdown, usize)> {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-14).ok()?;
    let run = Executor::new(Evaluator { config: eval.config }, solver)
        .configure(|s| s.max_iters(iters as u64))
        .run()
        .ok()?;
    let state = run.state();
    let best = state.get_best_param()?.clone();
    let (shape, e) = eval.trial(&best)?;
    Some((shape, e, state.get_iter() as usize))
}

/// Projected, diagonally preconditioned gradient descent with Armijo backtracking. A
/// simplex search takes over when the line search stalls (or throughout, for
/// [`Method::SimplexSearch`]).
pub fn minimize(config: &OptimizerConfig, initial: &ConvexShape) -> Result<OptimizationTrace> {
    config.check()?;
    initial.validate()?;
    let eval = Evaluator { config };
    let k = config.k_max.max(initial.order());
    let mut shape = initial.with_order(k);
    let mut e = eval.energy(&shape)?;
    let q = &config.quadrature;
    let mut g = gradient(&shape, config.p, config.lambda, q)?;
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut rows = vec![eval.row(0, &shape, &e, norm(&g))];
    // curvature-scaled metric: the elastica Hessian grows like (k²−1)²
    let precond: Vec<f64> = mode_orders(k).map(|k| 1.0 / (1.0 + (k * k - 1.0).powi(2))).collect();
    let mut step = config.step_init;
    let mut stop = StopReason::MaxIterations;
    let mut error = None;
    let mut iter = 0;

    while iter < config.max_iters {
        if norm(&g) < config.tol_grad {
            stop = StopReason::GradientTolerance;
            break;
        }
        let x = shape.to_coeffs();
        let accepted = if config.method == Method::SimplexSearch {
            None
        } else {
            let dir: Vec<f64> = g.iter().zip(&precond).map(|(g, p)| -g * p).collect();
            let mut alpha = step;
            let mut found = None;
            for _ in 0..MAX_BACKTRACKS {
                let raw: Vec<f64> = x.iter().zip(&dir).map(|(x, d)| x + alpha * d).collect();
                if let Some((s, et)) = eval.trial(&raw) {
                    let moved: f64 = s.to_coeffs().iter().zip(&x).zip(&g).map(|((a, b), g)| g * (a - b)).sum();
                    if et.total <= e.total + ARMIJO_C * moved && et.total <= e.total {
                        found = Some((s, et, alpha));
                        break;
                    }
                }
                alpha *= ARMIJO_SHRINK;
            }
            found
        };
        let (next, en, used) = match accepted {
            Some((s, et, alpha)) => {
                step = (alpha * 2.0).min(config.step_init * 1e3);
                (s, et, 1)
            }
            None => {
                let budget = config.max_iters - iter;
                let scale = 0.01 * shape.a0();
                match simplex_search(&eval, &x, scale, budget) {
                    Some((s, et, n)) if et.total < e.total => (s, et, n.clamp(1, budget)),
                    _ => {
                        stop = StopReason::LineSearchFailed;
                        error = Some(ElasticaError::LineSearchFailed(iter).to_string());
                        break;
                    }
                }
            }
        };
        iter += used;
        let de = e.total - en.total;
        shape = next;
        e = en;
        g = gradient(&shape, config.p, config.lambda, q)?;
        rows.push(eval.row(iter, &shape, &e, norm(&g)));
        if de < config.tol_energy * e.total.abs().max(1.0) {
            stop = StopReason::EnergyTolerance;
            break;
        }
    }
    if stop == StopReason::MaxIterations && norm(&g) < config.tol_grad {
        stop = StopReason::GradientTolerance;
    }
    Ok(OptimizationTrace {
        rows,
        final_shape: shape,
        converged: matches!(stop, StopReason::GradientTolerance | StopReason::EnergyTolerance),
        stop_reason: stop,
        error,
    })
}

/// Default starting point: the disk of radius `optimal_disk_radius(p, λ)`.
pub fn default_initial(p: f64, lambda: f64) -> ConvexShape {
    ConvexShape::disk(optimal_disk_radius(p, lambda))
}
