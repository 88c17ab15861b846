//! Invariance and inequality properties over randomly generated curves.

use std::f64::consts::PI;

use curvediff_core::analysis::{
    curve_wirtinger_check, harmonic_sum_bound_check, multiplicity_bound, newton_ratio_check, waiting_time_bound,
    wirtinger_check,
};
use curvediff_core::geometry::{generate, metrics, metrics_with_terms, resample_uniform, Mode, Param};
use curvediff_core::intersections::{brute_force_multiplicity, default_eps, find_crossings};
use curvediff_core::suites::{corpus_curve, random_corpus};
use curvediff_core::{CurveMetrics, Point, SampledCurve, ShapeSpec};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = ShapeSpec> {
    prop_oneof![
        (0.5f64..2.0, prop::collection::vec((2u32..7, 0.0f64..0.04, 0.0f64..6.3), 1..3)).prop_map(|(r0, modes)| {
            ShapeSpec::FourierCircle {
                r0,
                modes: modes.into_iter().map(|(m, eps, phase)| Mode { m, eps, phase }).collect(),
            }
        }),
        (0.5f64..2.0, 0.3f64..1.0).prop_map(|(a, ratio)| ShapeSpec::Ellipse { a, b: a * ratio }),
        (0.5f64..1.5, prop_oneof![0.1f64..0.7, 1.3f64..3.0]).prop_map(|(b, ratio)| ShapeSpec::Limacon { a: b * ratio, b }),
        (0.3f64..3.0).prop_map(|scale| ShapeSpec::Lemniscate { scale }),
    ]
}

fn uniform(spec: &ShapeSpec, n: usize) -> SampledCurve {
    resample_uniform(&generate(spec, n).unwrap(), n).unwrap()
}

fn rotated(c: &SampledCurve, angle: f64) -> SampledCurve {
    let (s, co) = angle.sin_cos();
    let v = c
        .vertices()
        .iter()
        .map(|p| Point::new(co * p.x - s * p.y, s * p.x + co * p.y))
        .collect();
    SampledCurve::new(v, Param::UniformInArclength, 0).unwrap()
}

fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(scale)
}

/// Quantities that must agree between congruent samplings.
fn same_shape(a: &CurveMetrics, b: &CurveMetrics, tol: f64) -> bool {
    close(a.length, b.length, tol, 0.0)
        && close(a.signed_area, b.signed_area, tol, a.length * a.length)
        && a.winding_number == b.winding_number
        && close(a.osc_energy, b.osc_energy, tol, 1e-12)
        && close(a.ks_norm_sq, b.ks_norm_sq, tol, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scale_covariance(spec in shape(), lambda in 0.2f64..5.0) {
        let c = uniform(&spec, 256);
        let (m, s) = (metrics(&c).unwrap(), metrics(&c.scaled(lambda)).unwrap());
        let tol = 1e-8;
        prop_assert!(close(s.length, lambda * m.length, tol, 0.0));
        prop_assert!(close(s.signed_area, lambda * lambda * m.signed_area, tol, (lambda * m.length).powi(2)));
        prop_assert!(close(s.average_curvature, m.average_curvature / lambda, tol, 1.0 / s.length));
        prop_assert!(close(s.osc_energy, m.osc_energy, tol, 1e-12));
        prop_assert!(close(s.ks_norm_sq, m.ks_norm_sq / lambda.powi(3), tol, 1e-12));
        prop_assert!(close(s.kss_norm_sq, m.kss_norm_sq / lambda.powi(5), tol, 1e-12));
        prop_assert_eq!(s.winding_number, m.winding_number);
    }

    #[test]
    fn orientation_reversal(spec in shape()) {
        let c = uniform(&spec, 256);
        let (m, r) = (metrics(&c).unwrap(), metrics(&c.reversed()).unwrap());
        prop_assert!(close(r.length, m.length, 1e-12, 0.0));
        prop_assert!(close(r.signed_area, -m.signed_area, 1e-10, m.length * m.length));
        prop_assert_eq!(r.winding_number, -m.winding_number);
        prop_assert!(close(r.average_curvature, -m.average_curvature, 1e-10, 1.0 / m.length));
        prop_assert!(close(r.osc_energy, m.osc_energy, 1e-9, 1e-12));
        prop_assert!(close(r.ks_norm_sq, m.ks_norm_sq, 1e-9, 1e-12));
    }

    #[test]
    fn rigid_motions_and_relabelling(spec in shape(), angle in 0.0f64..6.3, k in 0usize..256, dx in -5.0f64..5.0) {
        let c = uniform(&spec, 256);
        let m = metrics(&c).unwrap();
        for other in [rotated(&c, angle), c.rotated_start(k), c.translated(Point::new(dx, -dx))] {
            prop_assert!(same_shape(&m, &metrics(&other).unwrap(), 1e-9));
        }
    }

    #[test]
    fn curve_wirtinger_holds(spec in shape()) {
        let c = uniform(&spec, 256);
        let (m, osc) = metrics_with_terms(&c).unwrap();
        for v in curve_wirtinger_check(&m, &osc) {
            prop_assert!(v.holds, "{:?} on {:?}", v, spec);
        }
    }

    #[test]
    fn waiting_bound_is_nonnegative(spec in shape()) {
        let m = metrics(&uniform(&spec, 256)).unwrap();
        let b = waiting_time_bound(m.length, m.signed_area).unwrap();
        prop_assert!(b >= -1e-12 * (m.length / (2.0 * PI)).powi(4), "{b}");
    }

    #[test]
    fn crossings_invariant_under_rigid_motion(spec in shape(), angle in 0.0f64..6.3, k in 0usize..256) {
        let c = uniform(&spec, 256);
        let base = find_crossings(&c, default_eps(&c)).unwrap();
        for other in [rotated(&c, angle), c.rotated_start(k)] {
            let set = find_crossings(&other, default_eps(&other)).unwrap();
            prop_assert_eq!(set.multiplicity, base.multiplicity);
            prop_assert_eq!(set.clusters.len(), base.clusters.len());
        }
    }

    #[test]
    fn multiplicity_stable_under_refinement(spec in shape()) {
        let coarse = uniform(&spec, 256);
        let fine = uniform(&spec, 512);
        prop_assert_eq!(
            find_crossings(&coarse, default_eps(&coarse)).unwrap().multiplicity,
            find_crossings(&fine, default_eps(&fine)).unwrap().multiplicity
        );
    }

    #[test]
    fn newton_and_harmonic_hold(l in prop::collection::vec(1e-3f64..1e3, 2..16)) {
        for i in 0..=l.len() - 2 {
            prop_assert!(newton_ratio_check(&l, i).unwrap().holds);
        }
        prop_assert!(harmonic_sum_bound_check(&l).unwrap().holds);
    }

    #[test]
    fn wirtinger_holds_for_trig_polynomials(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
        period in 0.1f64..20.0,
        n in 32usize..200,
    ) {
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / n as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, (a, b))| {
                        let w = (j + 1) as f64;
                        a * (w * x).cos() + b * (w * x).sin()
                    })
                    .sum()
            })
            .collect();
        let r = wirtinger_check(&f, period).unwrap();
        prop_assert!(r.l2_holds && r.sup_holds);
        prop_assert!(r.equality_gap >= -1e-12);
    }

    #[test]
    fn multiplicity_bound_is_even_in_omega(m in 1u32..6, omega in -4i64..5) {
        prop_assert_eq!(multiplicity_bound(m, omega).unwrap(), multiplicity_bound(m, -omega).unwrap());
    }
}

#[test]
fn brute_force_oracle_agrees_on_corpus() {
    for spec in random_corpus(2024, 50) {
        let c = corpus_curve(&spec, 256).unwrap();
        let fast = find_crossings(&c, default_eps(&c)).unwrap().multiplicity;
        let slow = brute_force_multiplicity(&c, 4).unwrap();
        assert_eq!(fast, slow, "{spec:?}");
    }
}
