//! Parametric shape generators.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{Point, SampledCurve, MIN_VERTICES};
use crate::error::{invalid, Result};

/// One radial mode `eps * cos(m * theta + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub m: u32,
    pub eps: f64,
    pub phase: f64,
}

/// Closed-form test shapes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    /// Circle about the origin, traversed `turns` times.
    Circle { radius: f64, turns: u32 },
    Ellipse { a: f64, b: f64 },
    /// Radial graph `r(theta) = r0 (1 + sum eps_j cos(m_j theta + phase_j))`.
    FourierCircle { r0: f64, modes: Vec<Mode> },
    /// `r(theta) = a + b cos(theta)`; has an inner loop when `b > a`.
    Limacon { a: f64, b: f64 },
    /// Bernoulli lemniscate `(s cos t, s sin t cos t) / (1 + sin^2 t)`.
    Lemniscate { scale: f64 },
}

impl ShapeSpec {
    pub fn circle(radius: f64) -> Self {
        ShapeSpec::Circle { radius, turns: 1 }
    }

    pub fn fourier(r0: f64, modes: &[(u32, f64)]) -> Self {
        ShapeSpec::FourierCircle {
            r0,
            modes: modes
                .iter()
                .map(|&(m, eps)| Mode { m, eps, phase: 0.0 })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                invalid(format!("{name} must be positive and finite, got {v}"))
            }
        };
        match self {
            ShapeSpec::Circle { radius, turns } => {
                positive("radius", *radius)?;
                if *turns == 0 {
                    return invalid("turns must be at least 1");
                }
            }
            ShapeSpec::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
            }
            ShapeSpec::FourierCircle { r0, modes } => {
                positive("r0", *r0)?;
                let total: f64 = modes.iter().map(|m| m.eps.abs()).sum();
                if !total.is_finite() || total >= 1.0 {
                    return invalid(format!(
                        "sum of mode amplitudes must be below 1, got {total}"
                    ));
                }
                if modes.iter().any(|m| !m.phase.is_finite()) {
                    return invalid("mode phases must be finite");
                }
            }
            ShapeSpec::Limacon { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                if (a - b).abs() <= 1e-9 * a.max(*b) {
                    return invalid("a limacon with a = b is a cardioid, which has a cusp");
                }
            }
            ShapeSpec::Lemniscate { scale } => positive("scale", *scale)?,
        }
        Ok(())
    }

    /// Point at parameter `t` in `[0, 2 pi)`.
    fn point(&self, t: f64) -> Point {
        match self {
            ShapeSpec::Circle { radius, turns } => {
                let a = t * *turns as f64;
                Point::new(radius * a.cos(), radius * a.sin())
            }
            ShapeSpec::Ellipse { a, b } => Point::new(a * t.cos(), b * t.sin()),
            ShapeSpec::FourierCircle { r0, modes } => {
                let r = r0
                    * (1.0
                        + modes
                            .iter()
                            .map(|m| m.eps * (m.m as f64 * t + m.phase).cos())
                            .sum::<f64>());
                Point::new(r * t.cos(), r * t.sin())
            }
            ShapeSpec::Limacon { a, b } => {
                let r = a + b * t.cos();
                Point::new(r * t.cos(), r * t.sin())
            }
            ShapeSpec::Lemniscate { scale } => {
                let q = 1.0 + t.sin().powi(2);
                Point::new(scale * t.cos() / q, scale * t.sin() * t.cos() / q)
            }
        }
    }
}

/// Samples `spec` at `n` parameter values equally spaced in `[0, 2 pi)`.
///
/// The parametrization tag reflects the measured chord spread: circles come
/// out uniform in arc length, the other shapes generally do not.
pub fn generate(spec: &ShapeSpec, n: usize) -> Result<SampledCurve> {
    spec.validate()?;
    if n < MIN_VERTICES {
        return invalid(format!("need at least {MIN_VERTICES} vertices, got {n}"));
    }
    let vertices = (0..n)
        .map(|j| spec.point(2.0 * PI * j as f64 / n as f64))
        .collect();
    SampledCurve::from_vertices(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Param;

    #[test]
    fn circle_is_uniform_and_counterclockwise() {
        let c = generate(&ShapeSpec::circle(1.0), 256).unwrap();
        assert_eq!(c.len(), 256);
        assert_eq!(c.param(), Param::UniformInArclength);
        assert!(c.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
        assert!(c.polygon_area() > 0.0);
    }

    #[test]
    fn lemniscate_passes_through_origin_twice() {
        let c = generate(&ShapeSpec::Lemniscate { scale: 1.0 }, 512).unwrap();
        let at_origin = c.vertices().iter().filter(|p| p.norm() < 1e-12).count();
        assert_eq!(at_origin, 2);
        assert!(c.polygon_area().abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate(&ShapeSpec::circle(0.0), 64).is_err());
        assert!(generate(&ShapeSpec::circle(1.0), 8).is_err());
        assert!(generate(&ShapeSpec::Ellipse { a: 1.0, b: -1.0 }, 64).is_err());
        assert!(generate(&ShapeSpec::fourier(1.0, &[(3, 1.2)]), 64).is_err());
        assert!(generate(&ShapeSpec::Lemniscate { scale: f64::NAN }, 64).is_err());
        assert!(generate(&ShapeSpec::Limacon { a: 1.0, b: 1.0 }, 64).is_err());
        assert!(generate(
            &ShapeSpec::Circle {
                radius: 1.0,
                turns: 0
            },
            64
        )
        .is_err());
    }

    #[test]
    fn radial_graph_matches_formula() {
        let c = generate(&ShapeSpec::fourier(2.0, &[(3, 0.1)]), 60).unwrap();
        let p = c.vertices()[0];
        assert!((p.x - 2.2).abs() < 1e-15 && p.y.abs() < 1e-15);
    }
}
