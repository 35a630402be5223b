mod common;

use std::f64::consts::TAU;

use elastica::energy::{disk_energy, elastica_term, total_energy, QuadratureConfig};
use elastica::geometry::{hausdorff_distance, BoundaryCurve, ConvexShape, Point, SupportGrid, DEFAULT_GRID};
use elastica::optimizer::project_convex;
use proptest::prelude::*;

fn shape_strategy() -> impl Strategy<Value = ConvexShape> {
    (
        0.5f64..2.0,
        prop::array::uniform2(-0.2f64..0.2),
        prop::collection::vec(-1.0f64..1.0, 10),
    )
        .prop_map(|(a0, t, raw)| {
            let mut cos = vec![t[0] * a0];
            let mut sin = vec![t[1] * a0];
            for k in 2..=6 {
                let amp = 0.04 * a0 / (k * k) as f64;
                cos.push(raw[2 * (k - 2)] * amp);
                sin.push(raw[2 * (k - 2) + 1] * amp);
            }
            ConvexShape::new(a0, cos, sin).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_turning_is_two_pi(s in shape_strategy()) {
        let c = BoundaryCurve::from_shape(&s, 2048).unwrap();
        prop_assert!((c.total_turning() - TAU).abs() < 1e-9);
    }

    #[test]
    fn perimeter_at_most_pi_diameter(s in shape_strategy()) {
        prop_assert!(s.perimeter() <= std::f64::consts::PI * s.diameter() * (1.0 + 1e-12));
    }

    #[test]
    fn elastica_scales_inversely(s in shape_strategy(), f in 0.25f64..4.0) {
        let e = elastica_term(&s).unwrap();
        let es = elastica_term(&s.scaled(f)).unwrap();
        prop_assert!((es * f / e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_feasible_and_idempotent(raw in prop::collection::vec(-0.5f64..0.5, 8)) {
        let mut coeffs = vec![1.0];
        coeffs.extend(raw);
        let p = project_convex(&coeffs).unwrap();
        prop_assert!(p.min_radius_of_curvature(DEFAULT_GRID) >= p.convexity_floor());
        prop_assert_eq!(project_convex(&p.to_coeffs()).unwrap(), p);
    }

    #[test]
    fn hausdorff_is_symmetric(a in shape_strategy(), b in shape_strategy()) {
        let ca = BoundaryCurve::from_shape(&a, 512).unwrap();
        let cb = BoundaryCurve::from_shape(&b, 512).unwrap();
        prop_assert_eq!(hausdorff_distance(&ca, &cb), hausdorff_distance(&cb, &ca));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn energy_is_rigid_motion_invariant(
        s in shape_strategy(),
        phi in 0.0f64..TAU,
        t in prop::array::uniform2(-0.3f64..0.3),
    ) {
        let q = QuadratureConfig::default();
        let e = total_energy(&s, 1.0, 1.0, &q).unwrap().total;
        let moved = s.rotated(phi).translated(Point::new(t[0], t[1]) * s.a0());
        let em = total_energy(&moved, 1.0, 1.0, &q).unwrap().total;
        prop_assert!((em - e).abs() <= 1e-6 * e, "{} vs {}", em, e);
    }

    #[test]
    fn average_distance_scaling(s in shape_strategy(), f in 0.5f64..2.0, p in 1.0f64..3.0) {
        let q = QuadratureConfig::default();
        let a = total_energy(&s, p, 1.0, &q).unwrap().avg_distance_term;
        let b = total_energy(&s.scaled(f), p, 1.0, &q).unwrap().avg_distance_term;
        prop_assert!((b / (a * f.powf(p + 2.0)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn distance_matches_polyline(s in shape_strategy(), seed in 0u64..1000) {
        let grid = SupportGrid::new(&s, DEFAULT_GRID);
        let mut rng = common::rng(seed);
        for _ in 0..10 {
            let x = common::interior_point(&mut rng, &grid);
            let d = grid.distance(x).unwrap();
            let b = common::brute_force_distance(&s, x, 1 << 14);
            prop_assert!((d - b).abs() <= 1e-6 * s.diameter(), "{} vs {}", d, b);
        }
    }

    #[test]
    fn disk_energy_matches_quadrature(r in 0.3f64..3.0, p in 1.0f64..3.0, lambda in 0.2f64..3.0) {
        let q = QuadratureConfig::default();
        let e = total_energy(&ConvexShape::disk(r), p, lambda, &q).unwrap().total;
        let exact = disk_energy(r, p, lambda).unwrap();
        prop_assert!((e - exact).abs() <= 1e-6 * exact, "{} vs {}", e, exact);
    }
}
