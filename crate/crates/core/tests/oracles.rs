//! Discrete curve quantities against values computed independently by
//! adaptive quadrature of the smooth parametrizations (mpmath, 30 digits).

use std::f64::consts::PI;

use curvediff_core::geometry::{generate, metrics, resample_uniform};
use curvediff_core::{CurveMetrics, ShapeSpec};

/// `8 E(3/4)`, perimeter of the ellipse with semi-axes 2 and 1.
const ELLIPSE_2_1_LENGTH: f64 = 9.688_448_220_547_676;
/// `6 E(1 - (4/9) / 2.25)`, perimeter of the ellipse with semi-axes 1.5, 2/3.
const ELLIPSE_15_LENGTH: f64 = 7.060_933_089_586_896;

/// `(L, kbar, K_osc, |k_s|^2)`.
struct Oracle {
    length: f64,
    kbar: f64,
    kosc: f64,
    ks2: f64,
}

const ELLIPSE_2_1: Oracle = Oracle {
    length: 9.688_448_220_547_68,
    kbar: 0.648_523_392_410_142,
    kosc: 24.814_413_039_103,
    ks2: 11.474_247_606_670_9,
};

/// `r = 1 + 0.01 cos 3 theta`.
const RADIAL_3: Oracle = Oracle {
    length: 6.284_598_820_719_27,
    kbar: 0.999_775_082_932_1,
    kosc: 0.126_328_115_381_921,
    ks2: 0.181_014_568_913_885,
};

/// `r = 1 + 0.01 cos 2 theta`.
const RADIAL_2: Oracle = Oracle {
    length: 6.283_813_594_298_3,
    kbar: 0.999_900_014_997_376,
    kosc: 0.017_769_286_545_330_5,
    ks2: 0.011_322_472_672_183_6,
};

fn measured(spec: &ShapeSpec, n: usize) -> CurveMetrics {
    let c = resample_uniform(&generate(spec, n).unwrap(), n).unwrap();
    metrics(&c).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(m: &CurveMetrics, o: &Oracle, tol: f64) {
    assert!(rel(m.length, o.length) < 1e-6, "L {} vs {}", m.length, o.length);
    assert!(rel(m.average_curvature, o.kbar) < 1e-6, "kbar {}", m.average_curvature);
    assert!(rel(m.osc_energy, o.kosc) < tol, "K_osc {} vs {}", m.osc_energy, o.kosc);
    assert!(rel(m.ks_norm_sq, o.ks2) < tol, "|k_s|^2 {} vs {}", m.ks_norm_sq, o.ks2);
}

#[test]
fn ellipse_perimeters() {
    let m = measured(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 512);
    assert!(rel(m.length, ELLIPSE_2_1_LENGTH) < 1e-5, "{}", m.length);
    assert!(rel(m.signed_area, 2.0 * PI) < 1e-5, "{}", m.signed_area);
    let m = measured(&ShapeSpec::Ellipse { a: 1.5, b: 2.0 / 3.0 }, 256);
    assert!(rel(m.length, ELLIPSE_15_LENGTH) < 1e-5, "{}", m.length);
    assert!(rel(m.signed_area, PI) < 1e-5, "{}", m.signed_area);
}

#[test]
fn ellipse_energies() {
    check(&measured(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 512), &ELLIPSE_2_1, 0.01);
}

#[test]
fn perturbed_circle_energies() {
    check(&measured(&ShapeSpec::fourier(1.0, &[(3, 0.01)]), 256), &RADIAL_3, 0.01);
    check(&measured(&ShapeSpec::fourier(1.0, &[(2, 0.01)]), 256), &RADIAL_2, 0.01);
}

#[test]
fn energies_converge_under_refinement() {
    let spec = ShapeSpec::Ellipse { a: 2.0, b: 1.0 };
    let errors: Vec<(f64, f64)> = [64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let m = measured(&spec, n);
            (rel(m.osc_energy, ELLIPSE_2_1.kosc), rel(m.ks_norm_sq, ELLIPSE_2_1.ks2))
        })
        .collect();
    for w in errors.windows(2) {
        // Second-order stencils: halving h cuts the error by about 4.
        assert!(w[1].0 < w[0].0 / 3.0, "{errors:?}");
        assert!(w[1].1 < w[0].1 / 3.0, "{errors:?}");
    }
}

#[test]
fn admissibility_of_reference_perturbations() {
    let ks = curvediff_core::analysis::kstar();
    assert!(RADIAL_2.kosc < ks);
    assert!(RADIAL_3.kosc > ks);
}
