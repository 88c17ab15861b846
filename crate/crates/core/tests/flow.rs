//! Behaviour of complete runs.

use curvediff_core::flow::run;
use curvediff_core::geometry::{generate, Mode};
use curvediff_core::suites::AREA_DRIFT_TOL;
use curvediff_core::{FlowConfig, Redistribution, Scheme, ShapeSpec};
use proptest::prelude::*;

fn ellipse() -> ShapeSpec {
    ShapeSpec::Ellipse { a: 1.5, b: 2.0 / 3.0 }
}

#[test]
fn redistribution_gauge_does_not_move_the_trace() {
    let c = generate(&ellipse(), 256).unwrap();
    let every = FlowConfig::default().with_max_time(0.5);
    let lazy = FlowConfig {
        redistribution: Redistribution::WhenSpreadExceeds(0.01),
        ..every
    };
    let a = run(&c, &every).unwrap();
    let b = run(&c, &lazy).unwrap();
    assert!(!a.termination.is_blow_up() && !b.termination.is_blow_up());
    let d = a.final_state.curve.hausdorff(&b.final_state.curve);
    assert!(d <= 1e-4, "{d:e}");
}

#[test]
fn first_order_in_time() {
    let c = generate(&ellipse(), 128).unwrap();
    let at = |dt: f64, scheme: Scheme| {
        let cfg = FlowConfig {
            n: 128,
            dt,
            scheme,
            ..FlowConfig::default()
        }
        .with_max_time(0.05);
        run(&c, &cfg).unwrap().final_state.curve
    };
    let reference = at(1.25e-5, Scheme::LinearlyImplicit);
    let err = |dt, s| at(dt, s).hausdorff(&reference);
    let (e1, e2) = (err(2e-4, Scheme::LinearlyImplicit), err(1e-4, Scheme::LinearlyImplicit));
    let (f1, f2) = (err(2e-4, Scheme::LinearlyImplicitEuler), err(1e-4, Scheme::LinearlyImplicitEuler));
    for ratio in [e1 / e2, f1 / f2] {
        assert!(ratio > 1.7 && ratio < 2.8, "{e1:e} {e2:e} {f1:e} {f2:e}");
    }
    assert!(e2 < 0.5 * f2, "{e2:e} {f2:e}");
}

#[test]
fn runs_are_bitwise_reproducible() {
    let c = generate(&ShapeSpec::fourier(1.0, &[(3, 0.05), (5, 0.01)]), 128).unwrap();
    let cfg = FlowConfig {
        n: 128,
        ..FlowConfig::default()
    }
    .with_max_time(0.02);
    let a = run(&c, &cfg).unwrap();
    let b = run(&c, &cfg).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.final_state.curve, b.final_state.curve);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn short_runs_conserve_area_and_shorten(
        modes in prop::collection::vec((2u32..6, 0.0f64..0.05, 0.0f64..6.3), 1..3),
        r0 in 0.7f64..1.5,
    ) {
        let spec = ShapeSpec::FourierCircle {
            r0,
            modes: modes.into_iter().map(|(m, eps, phase)| Mode { m, eps, phase }).collect(),
        };
        let cfg = FlowConfig { n: 96, ..FlowConfig::default() }.with_max_time(0.01);
        let out = run(&generate(&spec, 96).unwrap(), &cfg).unwrap();
        prop_assert!(!out.termination.is_blow_up());
        let r = &out.records;
        let (a0, l0) = (r[0].metrics.signed_area, r[0].metrics.length);
        for w in r.windows(2) {
            prop_assert!(w[1].metrics.length <= w[0].metrics.length + 1e-10 * l0);
            prop_assert!((w[1].metrics.signed_area - a0).abs() <= AREA_DRIFT_TOL * a0);
            prop_assert_eq!(w[1].metrics.winding_number, 1);
        }
    }
}
