//! Density of a curve at a point of its trace.
//!
//! With the curve translated so the point is the origin,
//! `integral_{|gamma| >= eps} (k^2 - k0^2) |gamma| ds` with
//! `k0 = 2 |<gamma, nu> / |gamma|^2 + k / 2|` equals a boundary term at the
//! circle of radius `eps` that tends to `8` times the number of preimages of
//! the point, with an error of order `eps^2` on a smooth curve. The integral is
//! evaluated at two cutoffs and extrapolated quadratically to `eps = 0`.

use serde::{Deserialize, Serialize};

use super::Report;
use crate::error::{invalid, Error, Result};
use crate::geometry::{measure, point_segment_distance, Point, SampledCurve};

/// The smaller cutoff radius, in units of the mean chord `L / n`.
const CUTOFF_CHORDS: f64 = 3.0;

/// Largest distance from the point to the polygon, in units of the mean chord.
const TRACE_TOLERANCE_CHORDS: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// Extrapolated integral, nominally `8 |gamma^-1(x)|`.
    pub value: f64,
    /// `value / 8`.
    pub preimages: f64,
    /// `(eps, integral over |gamma| >= eps)` at the two cutoffs.
    pub cutoffs: [(f64, f64); 2],
    /// `integral k^2 |gamma| ds`, an upper bound for `value`.
    pub k2_moment: f64,
    /// Distance from the point to the polygon.
    pub trace_distance: f64,
}

impl DensityReport {
    pub fn to_report(&self) -> Report {
        Report::new("density")
            .value("value", self.value)
            .value("preimages", self.preimages)
            .value("eps1", self.cutoffs[0].0)
            .value("integral_eps1", self.cutoffs[0].1)
            .value("eps2", self.cutoffs[1].0)
            .value("integral_eps2", self.cutoffs[1].1)
            .value("k2_moment", self.k2_moment)
            .value("trace_distance", self.trace_distance)
    }
}

/// Fraction of the half segment from radius `r0` toward `r1` that lies
/// outside the ball of radius `eps`, with the radius interpolated linearly.
fn outside_fraction(r0: f64, r1: f64, eps: f64) -> f64 {
    let rm = 0.5 * (r0 + r1);
    match (r0 >= eps, rm >= eps) {
        (true, true) => 1.0,
        (false, false) => 0.0,
        (true, false) => (r0 - eps) / (r0 - rm),
        (false, true) => (rm - eps) / (rm - r0),
    }
}

/// Density integral at `point`, which must lie on the trace of a curve that
/// is uniform in arc length.
pub fn density_integral(curve: &SampledCurve, point: Point) -> Result<DensityReport> {
    if !curve.is_uniform() {
        return Err(Error::NotUniform(
            "density integral needs a curve uniform in arc length".into(),
        ));
    }
    if !point.is_finite() {
        return invalid("point is not finite");
    }
    let n = curve.len();
    let chord = curve.polygon_length() / n as f64;
    let trace_distance = (0..n)
        .map(|i| point_segment_distance(point, curve.vertex(i as isize), curve.vertex(i as isize + 1)))
        .fold(f64::INFINITY, f64::min);
    if trace_distance > TRACE_TOLERANCE_CHORDS * chord {
        return invalid(format!(
            "point ({}, {}) is {trace_distance:.3e} from the curve",
            point.x, point.y
        ));
    }

    let shifted = curve.translated(-point);
    let v = shifted.vertices();
    let (m, _, frame) = measure(&shifted)?;
    // Chord weights rescaled to the arc-corrected length.
    let stretch = m.length / frame.h.iter().sum::<f64>();
    let r: Vec<f64> = v.iter().map(|p| p.norm()).collect();
    let f: Vec<f64> = (0..n)
        .map(|i| {
            let k = frame.k[i];
            if r[i] == 0.0 {
                return 0.0;
            }
            let k0 = 2.0 * (v[i].dot(frame.nu[i]) / (r[i] * r[i]) + 0.5 * k).abs();
            (k * k - k0 * k0) * r[i]
        })
        .collect();
    let integral = |eps: f64| {
        (0..n)
            .map(|i| {
                let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
                let w = 0.5 * frame.h[im] * outside_fraction(r[i], r[im], eps)
                    + 0.5 * frame.h[i] * outside_fraction(r[i], r[ip], eps);
                f[i] * w
            })
            .sum::<f64>()
            * stretch
    };
    let eps1 = CUTOFF_CHORDS * chord;
    let eps2 = 2.0 * eps1;
    let (i1, i2) = (integral(eps1), integral(eps2));
    let value = (4.0 * i1 - i2) / 3.0;
    let k2_moment = (0..n).map(|i| frame.k[i].powi(2) * r[i] * frame.d[i]).sum::<f64>() * stretch;
    Ok(DensityReport {
        value,
        preimages: value / 8.0,
        cutoffs: [(eps1, i1), (eps2, i2)],
        k2_moment,
        trace_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, resample_uniform, ShapeSpec};

    fn circle_through_origin(n: usize) -> SampledCurve {
        generate(&ShapeSpec::circle(1.0), n)
            .unwrap()
            .translated(Point::new(1.0, 0.0))
    }

    #[test]
    fn circle_density_is_eight() {
        let c = circle_through_origin(1024);
        let d = density_integral(&c, Point::new(0.0, 0.0)).unwrap();
        assert!((d.value - 8.0).abs() < 1e-2, "{d:?}");
        // The circle is the equality case of `value <= k2_moment`; the kink of
        // `|gamma|` at the base point limits the quadrature to second order.
        assert!((d.k2_moment - 8.0).abs() < 1e-4, "{}", d.k2_moment);
    }

    #[test]
    fn point_between_vertices() {
        let c = circle_through_origin(1024);
        let a = 0.5 * std::f64::consts::TAU / 1024.0;
        let p = Point::new(1.0 + a.cos(), a.sin());
        let d = density_integral(&c, p).unwrap();
        assert!((d.value - 8.0).abs() < 1e-2, "{d:?}");
    }

    #[test]
    fn lemniscate_crossing_is_sixteen() {
        let c = resample_uniform(&generate(&ShapeSpec::Lemniscate { scale: 1.0 }, 1024).unwrap(), 1024)
            .unwrap();
        let d = density_integral(&c, Point::new(0.0, 0.0)).unwrap();
        assert!((d.value - 16.0).abs() < 0.05 * 16.0, "{d:?}");
    }

    #[test]
    fn rejects_points_off_the_trace() {
        let c = circle_through_origin(256);
        assert!(matches!(
            density_integral(&c, Point::new(1.0, 0.0)),
            Err(Error::InvalidInput(_))
        ));
        let uneven = generate(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 256).unwrap();
        assert!(matches!(
            density_integral(&uneven, Point::new(2.0, 0.0)),
            Err(Error::NotUniform(_))
        ));
    }

    #[test]
    fn fraction_is_continuous_in_eps() {
        assert_eq!(outside_fraction(2.0, 4.0, 1.0), 1.0);
        assert_eq!(outside_fraction(0.5, 0.7, 1.0), 0.0);
        assert!((outside_fraction(0.0, 2.0, 0.5) - 0.5).abs() < 1e-15);
        assert!((outside_fraction(2.0, 0.0, 1.5) - 0.5).abs() < 1e-15);
    }
}
