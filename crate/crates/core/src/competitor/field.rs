use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{ElasticaError, Result};
use crate::geometry::Point;

/// `v`, `v′` and `v″` at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldJet {
    pub v: Point,
    pub dv: Point,
    pub d2v: Point,
}

/// The vector field on `[t₋, t₊]` that rotates `(0,1)` to `(−1,0)` at unit angular rate up
/// to `t_⊥`, then shrinks to `0` at `t₊`.
pub fn vector_field_v(s: f64, t_minus: f64, t_bot: f64, t_plus: f64) -> Result<Point> {
    Ok(vector_field_jet(s, t_minus, t_bot, t_plus)?.v)
}

/// Analytic `v`, `v′`, `v″`. At `t_⊥` the first branch is used.
pub fn vector_field_jet(s: f64, t_minus: f64, t_bot: f64, t_plus: f64) -> Result<FieldJet> {
    if !(t_minus < t_bot && t_bot < t_plus) {
        return Err(ElasticaError::InvalidParameter(format!(
            "need t₋ < t_⊥ < t₊, got {t_minus}, {t_bot}, {t_plus}"
        )));
    }
    if !(t_minus..=t_plus).contains(&s) {
        return Err(ElasticaError::OutOfRange { value: s, lo: t_minus, hi: t_plus });
    }
    Ok(if s <= t_bot {
        let d = t_bot - t_minus;
        let w = FRAC_PI_2 / d;
        let psi = FRAC_PI_2 * (1.0 + (s - t_minus) / d);
        let (sn, cs) = psi.sin_cos();
        FieldJet {
            v: Point::new(cs, sn),
            dv: Point::new(-sn, cs) * w,
            d2v: Point::new(cs, sn) * (-w * w),
        }
    } else {
        let d = t_plus - t_bot;
        let w = FRAC_PI_2 / d;
        let x = (t_plus - s) / d;
        let psi = FRAC_PI_2 * (1.0 + x);
        let (sn, cs) = psi.sin_cos();
        FieldJet {
            v: Point::new(cs, -x * x * sn),
            dv: Point::new(w * sn, w * x * x * cs + 2.0 * x * sn / d),
            d2v: Point::new(
                -w * w * cs,
                -2.0 * sn / (d * d) - 4.0 * x * w * cs / d + w * w * x * x * sn,
            ),
        }
    })
}

/// Sampled norms of `v′` and `v″` against the bounds `4(λ⁻¹+π)` and `16(λ⁻¹+π)²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VNormReport {
    pub gap_minus_bot: f64,
    pub gap_bot_plus: f64,
    pub gap_floor: f64,
    pub sup_dv: f64,
    pub sup_d2v: f64,
    pub dv_bound: f64,
    pub d2v_bound: f64,
    /// Largest discrepancy between the finite-difference and analytic derivatives.
    pub analytic_mismatch: f64,
    pub pass: bool,
}

/// Samples `v′` and `v″` by 5-point central differences on both branches, staying clear of
/// `t_⊥` and of the interval ends.
pub fn v_norm_check(t_minus: f64, t_bot: f64, t_plus: f64, lambda: f64) -> Result<VNormReport> {
    let a = 1.0 / lambda + PI;
    let floor = 1.0 / a;
    let (g1, g2) = (t_bot - t_minus, t_plus - t_bot);
    if !(g1 >= floor && g2 >= floor) {
        return Err(ElasticaError::HypothesisUnmet(format!(
            "gaps t_⊥ − t₋ = {g1}, t₊ − t_⊥ = {g2} must be ≥ 1/(λ⁻¹+π) = {floor}"
        )));
    }
    let samples = 2000;
    let mut sup_dv: f64 = 0.0;
    let mut sup_d2v: f64 = 0.0;
    let mut mismatch: f64 = 0.0;
    for (lo, hi) in [(t_minus, t_bot), (t_bot, t_plus)] {
        let h = (hi - lo) * 1e-4;
        for i in 0..=samples {
            let s = lo + 3.0 * h + (hi - lo - 6.0 * h) * i as f64 / samples as f64;
            let v = |x: f64| vector_field_v(x, t_minus, t_bot, t_plus).unwrap();
            let (m2, m1, c0, p1, p2) = (v(s - 2.0 * h), v(s - h), v(s), v(s + h), v(s + 2.0 * h));
            let d1 = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
            let d2 = (-m2 + m1 * 16.0 - c0 * 30.0 + p1 * 16.0 - p2) / (12.0 * h * h);
            let jet = vector_field_jet(s, t_minus, t_bot, t_plus)?;
            sup_dv = sup_dv.max(d1.norm());
            sup_d2v = sup_d2v.max(d2.norm());
            mismatch = mismatch
                .max((d1 - jet.dv).norm() / (1.0 + jet.dv.norm()))
                .max((d2 - jet.d2v).norm() / (1.0 + jet.d2v.norm()));
        }
    }
    let (dv_bound, d2v_bound) = (4.0 * a, 16.0 * a * a);
    Ok(VNormReport {
        gap_minus_bot: g1,
        gap_bot_plus: g2,
        gap_floor: floor,
        sup_dv,
        sup_d2v,
        dv_bound,
        d2v_bound,
        analytic_mismatch: mismatch,
        pass: sup_dv <= dv_bound && sup_d2v <= d2v_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const T: (f64, f64, f64) = (FRAC_PI_2, PI, 1.5 * PI);

    #[test]
    fn endpoint_values() {
        let (a, b, c) = T;
        let v = vector_field_v(a, a, b, c).unwrap();
        assert!((v - Point::new(0.0, 1.0)).norm() < 1e-15);
        let v = vector_field_v(b, a, b, c).unwrap();
        assert!((v - Point::new(-1.0, 0.0)).norm() < 1e-15);
        let v = vector_field_v(c, a, b, c).unwrap();
        assert!(v.norm() < 1e-15);
        assert!(matches!(vector_field_v(c + 0.1, a, b, c), Err(ElasticaError::OutOfRange { .. })));
    }

    #[test]
    fn continuous_across_t_bot() {
        let (a, b, c) = (0.4, 1.9, 2.3);
        let l = vector_field_v(b - 5e-7, a, b, c).unwrap();
        let r = vector_field_v(b + 5e-7, a, b, c).unwrap();
        assert!((l - r).norm() <= 1e-5);
        // one-sided derivatives are parallel to (0, −1)
        let jl = vector_field_jet(b, a, b, c).unwrap();
        let jr = vector_field_jet(b + 1e-12, a, b, c).unwrap();
        assert!(jl.dv.x.abs() < 1e-12 && jl.dv.y < 0.0);
        assert!(jr.dv.x.abs() < 1e-9 && jr.dv.y < 0.0);
        assert_relative_eq!(jl.dv.y, -FRAC_PI_2 / (b - a), epsilon = 1e-12);
        assert_relative_eq!(jr.dv.y, -FRAC_PI_2 / (c - b), epsilon = 1e-9);
    }

    #[test]
    fn unit_circle_norms() {
        let (a, b, c) = T;
        let r = v_norm_check(a, b, c, 1.0).unwrap();
        assert!(r.pass);
        assert!(r.analytic_mismatch < 1e-6, "{}", r.analytic_mismatch);
        // first branch is a unit-speed rotation at rate (π/2)/(t_⊥ − t₋) = 1
        assert!(r.sup_dv >= 1.0 - 1e-6);
        let r = v_norm_check(a, b, c, 0.5).unwrap();
        assert!(r.pass && r.dv_bound > 4.0 * (1.0 + PI));
    }

    #[test]
    fn first_branch_speed_is_constant() {
        let (a, b, c) = (0.3, 1.2, 2.0);
        for s in [0.3, 0.5, 0.9, 1.2] {
            let j = vector_field_jet(s, a, b, c).unwrap();
            assert_relative_eq!(j.dv.norm(), FRAC_PI_2 / (b - a), epsilon = 1e-12);
        }
    }

    #[test]
    fn gap_hypothesis() {
        assert!(matches!(v_norm_check(0.0, 0.1, 2.0, 1.0), Err(ElasticaError::HypothesisUnmet(_))));
    }
}
