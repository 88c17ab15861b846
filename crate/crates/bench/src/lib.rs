//! Fixture curves shared by the benchmarks.

use curvediff_core::geometry::{generate, resample_uniform};
use curvediff_core::{SampledCurve, ShapeSpec};

/// Perturbed circle, uniform in arc length.
pub fn perturbed_circle(n: usize) -> SampledCurve {
    uniform(&ShapeSpec::fourier(1.0, &[(2, 0.01), (5, 0.004)]), n)
}

/// Lemniscate, uniform in arc length.
pub fn lemniscate(n: usize) -> SampledCurve {
    uniform(&ShapeSpec::Lemniscate { scale: 1.0 }, n)
}

fn uniform(spec: &ShapeSpec, n: usize) -> SampledCurve {
    resample_uniform(&generate(spec, n).expect("valid fixture"), n).expect("resamples")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_uniform() {
        assert!(perturbed_circle(64).is_uniform());
        assert!(lemniscate(64).is_uniform());
    }
}
