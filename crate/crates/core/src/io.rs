//! Shape files: `{"a0", "cos", "sin"}` or `{"polyline": [[x, y], ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ElasticaError, Result};
use crate::geometry::{grid_angles, ConvexPolygon, ConvexShape, Point, DEFAULT_GRID, DEFAULT_K_MAX};
use crate::optimizer::project_convex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeFile {
    Fourier {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Polyline {
        polyline: Vec<[f64; 2]>,
    },
}

impl From<&ConvexShape> for ShapeFile {
    fn from(s: &ConvexShape) -> Self {
        ShapeFile::Fourier {
            a0: s.a0(),
            cos: s.cos_coeffs().to_vec(),
            sin: s.sin_coeffs().to_vec(),
        }
    }
}

impl ShapeFile {
    /// Validated shape. Polylines must be convex; they are then replaced by the order
    /// [`DEFAULT_K_MAX`] Fourier fit of their support function, recentred and projected.
    pub fn into_shape(self) -> Result<ConvexShape> {
        match self {
            ShapeFile::Fourier { a0, cos, sin } => {
                let s = ConvexShape::new(a0, cos, sin)?;
                s.validate()?;
                Ok(s)
            }
            ShapeFile::Polyline { polyline } => polyline_to_shape(&polyline, DEFAULT_K_MAX),
        }
    }
}

pub fn polyline_to_shape(polyline: &[[f64; 2]], k_max: usize) -> Result<ConvexShape> {
    let mut v: Vec<Point> = polyline.iter().map(|&[x, y]| Point::new(x, y)).collect();
    if v.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(ElasticaError::InvalidShape("non-finite polyline vertex".into()));
    }
    if v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    if crate::geometry::polygon_area_centroid(&v).0 < 0.0 {
        v.reverse();
    }
    let poly = ConvexPolygon::new(v, 1e-12)?;
    let c = poly.centroid();
    let angles: Vec<f64> = grid_angles(DEFAULT_GRID).collect();
    let h: Vec<f64> = angles
        .iter()
        .map(|&t| {
            let u = Point::new(t.cos(), t.sin());
            poly.vertices().iter().map(|p| (p - c).dot(&u)).fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let n = h.len() as f64;
    let a0 = h.iter().sum::<f64>() / n;
    let coeff = |k: usize, f: fn(f64) -> f64| {
        2.0 / n * h.iter().zip(&angles).map(|(h, &t)| h * f(k as f64 * t)).sum::<f64>()
    };
    let cos = (1..=k_max).map(|k| coeff(k, f64::cos)).collect();
    let sin = (1..=k_max).map(|k| coeff(k, f64::sin)).collect();
    let fit = ConvexShape::new(a0, cos, sin)?;
    project_convex(&fit.to_coeffs())
}

pub fn parse_shape(text: &str) -> Result<ConvexShape> {
    let file: ShapeFile = serde_json::from_str(text)?;
    file.into_shape()
}

pub fn read_shape(path: &Path) -> Result<ConvexShape> {
    let text = fs::read_to_string(path).map_err(|e| ElasticaError::Io(format!("{}: {e}", path.display())))?;
    parse_shape(&text)
}

pub fn shape_json(shape: &ConvexShape) -> String {
    serde_json::to_string_pretty(&ShapeFile::from(shape)).expect("shape serialises")
}

pub fn write_shape(path: &Path, shape: &ConvexShape) -> Result<()> {
    fs::write(path, shape_json(shape) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fourier_round_trip() {
        let s = ConvexShape::new(1.0, vec![0.0, 0.1], vec![0.02, -0.03]).unwrap();
        let back = parse_shape(&shape_json(&s)).unwrap();
        assert_eq!(back, s);
        assert_eq!(parse_shape(r#"{"a0": 2.0}"#).unwrap(), ConvexShape::disk(2.0).with_order(0));
    }

    #[test]
    fn malformed_and_nonconvex_inputs() {
        let e = parse_shape("{\"a0\": ").unwrap_err();
        assert!(e.is_input_error());
        let e = parse_shape(r#"{"a0": 1.0, "cos": [0.0, 0.5], "sin": [0.0, 0.0]}"#).unwrap_err();
        assert!(matches!(e, ElasticaError::ConvexityViolation { .. }));
        let e = parse_shape(r#"{"polyline": [[0,0],[2,0],[1,0.2],[2,2],[0,2]]}"#).unwrap_err();
        assert!(matches!(e, ElasticaError::NonConvexPolyline { .. }));
        assert!(!e.is_input_error());
    }

    #[test]
    fn polyline_fit_of_regular_polygon() {
        let n = 64;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                [3.0 + t.cos(), -1.0 + t.sin()]
            })
            .collect();
        let s = parse_shape(&serde_json::json!({ "polyline": pts }).to_string()).unwrap();
        s.validate().unwrap();
        // mean support of the inscribed 64-gon is close to its circumradius
        assert_relative_eq!(s.a0(), 1.0, epsilon = 2e-3);
        assert!(s.steiner_point().norm() < 1e-3);
        // clockwise input gives the same shape
        let rev: Vec<[f64; 2]> = pts.iter().rev().copied().collect();
        let r = parse_shape(&serde_json::json!({ "polyline": rev }).to_string()).unwrap();
        assert_relative_eq!(r.a0(), s.a0(), epsilon = 1e-12);
    }
}
