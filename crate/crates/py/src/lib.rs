//! Python bindings: shapes, energy, bounds, competitor sweeps and the optimizer.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use elastica::bounds;
use elastica::competitor::{verify_energy_inequalities, CompetitorParams};
use elastica::energy::{self, AvgScheme, QuadratureConfig};
use elastica::geometry::{BoundaryCurve, ConvexShape, Point};
use elastica::io;
use elastica::optimizer::{self, OptimizerConfig};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(elastica_py, ElasticaError, PyException);

fn err(e: elastica::ElasticaError) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        ElasticaError::new_err(e.to_string())
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn quadrature(n_theta: usize, scheme: &str) -> PyResult<QuadratureConfig> {
    let scheme = match scheme {
        "polar" => AvgScheme::Polar,
        "normal" => AvgScheme::Normal,
        other => return Err(PyValueError::new_err(format!("unknown scheme {other:?}"))),
    };
    Ok(QuadratureConfig {
        n_theta,
        n_normal: n_theta.max(16) * 16,
        scheme,
        ..QuadratureConfig::default()
    })
}

/// Convex body given by its support function `a0 + Σ a_k cos kθ + b_k sin kθ`.
#[pyclass(name = "Shape", module = "elastica_py", frozen, from_py_object)]
#[derive(Clone)]
pub struct Shape {
    inner: ConvexShape,
}

#[pymethods]
impl Shape {
    #[new]
    #[pyo3(signature = (a0, cos = Vec::new(), sin = Vec::new()))]
    fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> PyResult<Self> {
        let inner = ConvexShape::new(a0, cos, sin).map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn disk(r: f64) -> PyResult<Self> {
        if !(r > 0.0) {
            return Err(err(elastica::ElasticaError::NonpositiveRadius(r)));
        }
        Ok(Self { inner: ConvexShape::disk(r) })
    }

    /// Parses the shape JSON format, including `{"polyline": ...}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_shape(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        io::shape_json(&self.inner)
    }

    #[getter]
    fn a0(&self) -> f64 {
        self.inner.a0()
    }

    /// `[a0, a_1..a_K, b_1..b_K]`.
    fn coeffs(&self) -> Vec<f64> {
        self.inner.to_coeffs()
    }

    fn support(&self, theta: f64) -> f64 {
        self.inner.support(theta)
    }

    fn point(&self, theta: f64) -> (f64, f64) {
        let p = self.inner.point(theta);
        (p.x, p.y)
    }

    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    fn area(&self) -> f64 {
        self.inner.area()
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn min_radius_of_curvature(&self) -> f64 {
        self.inner.min_radius_of_curvature(elastica::geometry::DEFAULT_GRID)
    }

    fn scaled(&self, s: f64) -> Self {
        Self { inner: self.inner.scaled(s) }
    }

    fn rotated(&self, phi: f64) -> Self {
        Self { inner: self.inner.rotated(phi) }
    }

    fn translated(&self, x: f64, y: f64) -> Self {
        Self { inner: self.inner.translated(Point::new(x, y)) }
    }

    fn distance_to_boundary(&self, x: f64, y: f64) -> PyResult<f64> {
        elastica::geometry::distance_to_boundary(&self.inner, Point::new(x, y)).map_err(err)
    }

    /// Closed boundary polyline with `n` arc-length samples.
    fn boundary(&self, n: usize) -> PyResult<Vec<(f64, f64)>> {
        let c = BoundaryCurve::from_shape(&self.inner, n).map_err(err)?;
        Ok(c.points().iter().map(|p| (p.x, p.y)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Shape(a0={}, order={})", self.inner.a0(), self.inner.order())
    }
}

/// `{"p", "lambda", "avg_distance_term", "elastica_term", "total"}`.
#[pyfunction]
#[pyo3(signature = (shape, p = 1.0, lam = 1.0, n_theta = 256, scheme = "polar"))]
fn total_energy<'py>(
    py: Python<'py>,
    shape: &Shape,
    p: f64,
    lam: f64,
    n_theta: usize,
    scheme: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let q = quadrature(n_theta, scheme)?;
    let e = energy::total_energy(&shape.inner, p, lam, &q).map_err(err)?;
    to_py(py, &e)
}

#[pyfunction]
#[pyo3(signature = (r, p = 1.0, lam = 1.0))]
fn disk_energy(r: f64, p: f64, lam: f64) -> PyResult<f64> {
    energy::disk_energy(r, p, lam).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p = 1.0, lam = 1.0))]
fn optimal_disk_radius(p: f64, lam: f64) -> f64 {
    energy::optimal_disk_radius(p, lam)
}

/// `(C₁, C₂, C)` at `(p, λ)`.
#[pyfunction]
#[pyo3(signature = (p = 1.0, lam = 1.0))]
fn constants(p: f64, lam: f64) -> (f64, f64, f64) {
    (bounds::constant_c1(p, lam), bounds::constant_c2(p, lam), bounds::constant_c(p, lam))
}

/// Bounds report as a dict; `report["entries"]` lists every inequality.
#[pyfunction]
#[pyo3(signature = (shape, p = 1.0, lam = 1.0, shape_id = "shape"))]
fn verify_bounds<'py>(
    py: Python<'py>,
    shape: &Shape,
    p: f64,
    lam: f64,
    shape_id: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let r = bounds::verify_bounds(&shape.inner, shape_id, p, lam, &QuadratureConfig::default()).map_err(err)?;
    let out = to_py(py, &r)?;
    out.set_item("all_pass", r.all_pass())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (shape, eps_list, p = 1.0, lam = 1.0, samples = 8192))]
fn competitor_sweep<'py>(
    py: Python<'py>,
    shape: &Shape,
    eps_list: Vec<f64>,
    p: f64,
    lam: f64,
    samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let curve = BoundaryCurve::from_shape(&shape.inner, samples).map_err(err)?;
    let params = CompetitorParams { p, lambda: lam, ..CompetitorParams::default() };
    let rep = py
        .detach(|| verify_energy_inequalities(&curve, &eps_list, &params, None))
        .map_err(err)?;
    let out = to_py(py, &rep)?;
    out.set_item("all_pass", rep.all_pass())?;
    Ok(out)
}

/// Runs the optimizer; returns `(final_shape, trace_rows, converged)`.
#[pyfunction]
#[pyo3(signature = (p = 1.0, lam = 1.0, max_iters = 200, init = None))]
fn minimize<'py>(
    py: Python<'py>,
    p: f64,
    lam: f64,
    max_iters: usize,
    init: Option<Shape>,
) -> PyResult<(Shape, Bound<'py, PyAny>, bool)> {
    let start = init.map_or_else(|| optimizer::default_initial(p, lam), |s| s.inner);
    let cfg = OptimizerConfig { p, lambda: lam, max_iters, ..OptimizerConfig::default() };
    let trace = py.detach(|| optimizer::minimize(&cfg, &start)).map_err(err)?;
    let rows = to_py(py, &trace.rows)?;
    Ok((Shape { inner: trace.final_shape }, rows, trace.converged))
}

#[pymodule]
fn elastica_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ElasticaError", m.py().get_type::<ElasticaError>())?;
    m.add_class::<Shape>()?;
    m.add_function(wrap_pyfunction!(total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(disk_energy, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_disk_radius, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(competitor_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    Ok(())
}
