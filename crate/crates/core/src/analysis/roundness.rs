//! Distance of a curve from a round circle.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::Report;
use crate::error::{invalid, Result};
use crate::geometry::{Point, SampledCurve};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundnessReport {
    /// `sqrt(|A0| / pi)`.
    pub radius: f64,
    /// Area centroid of the polygon.
    pub center: Point,
    /// `max_i | |X_i - center| - radius |`.
    pub max_deviation: f64,
    /// `max_deviation / radius`.
    pub relative: f64,
}

impl RoundnessReport {
    pub fn to_report(&self, tol: f64) -> Report {
        Report::new("roundness")
            .value("radius", self.radius)
            .value("center_x", self.center.x)
            .value("center_y", self.center.y)
            .value("max_deviation", self.max_deviation)
            .value("relative_deviation", self.relative)
            .value("tolerance", tol)
            .verdict("within_tolerance", self.relative <= tol)
    }
}

/// Area centroid of the polygon, or the vertex mean when the area vanishes.
pub fn area_centroid(curve: &SampledCurve) -> Point {
    let v = curve.vertices();
    let n = v.len();
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let c = p.cross(q);
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    if a.abs() <= 1e-14 * curve.polygon_length().powi(2) {
        return curve.centroid();
    }
    Point::new(cx / (3.0 * a), cy / (3.0 * a))
}

/// Radial deviation of `curve` from the circle of area `|a0|` about its
/// area centroid.
pub fn roundness(curve: &SampledCurve, a0: f64) -> Result<RoundnessReport> {
    if !(a0.is_finite() && a0 != 0.0) {
        return invalid(format!("reference area must be finite and nonzero, got {a0}"));
    }
    let radius = (a0.abs() / PI).sqrt();
    let center = area_centroid(curve);
    let max_deviation = curve
        .vertices()
        .iter()
        .map(|&p| ((p - center).norm() - radius).abs())
        .fold(0.0, f64::max);
    Ok(RoundnessReport {
        radius,
        center,
        max_deviation,
        relative: max_deviation / radius,
    })
}
