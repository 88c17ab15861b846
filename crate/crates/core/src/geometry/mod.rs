//! Closed sampled curves and their discrete geometry.
//!
//! Curves are closed polygons with periodic indexing. The normal is the
//! tangent rotated by a quarter turn counterclockwise, so a counterclockwise
//! circle has positive curvature and positive signed area.

mod discrete;
mod metrics;
mod resample;
mod shapes;

pub use discrete::{curvature_derivatives, curvature_profile, Frame};
pub use metrics::{metrics, metrics_with_terms, CurveMetrics, OscTerms};
pub(crate) use metrics::measure;
pub use resample::{resample_uniform, Resampler};
pub use shapes::{generate, Mode, ShapeSpec};

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Smallest vertex count accepted for a sampled curve.
pub const MIN_VERTICES: usize = 16;

/// Relative chord spread below which a curve counts as uniform in arc length.
pub const UNIFORM_SPREAD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// How the vertices of a curve are distributed along its trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Param {
    UniformInParameter,
    UniformInArclength,
}

/// A closed plane curve given by an ordered periodic list of vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    vertices: Vec<Point>,
    param: Param,
    generation: u32,
}

impl SampledCurve {
    /// Builds a curve and classifies its parametrization from the chord spread.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let mut curve = Self {
            vertices,
            param: Param::UniformInParameter,
            generation: 0,
        };
        curve.validate_basic()?;
        if curve.chord_spread() <= UNIFORM_SPREAD {
            curve.param = Param::UniformInArclength;
        }
        Ok(curve)
    }

    /// Builds a curve with an explicit parametrization tag, checking it.
    pub fn new(vertices: Vec<Point>, param: Param, generation: u32) -> Result<Self> {
        let curve = Self {
            vertices,
            param,
            generation,
        };
        curve.validate_basic()?;
        if param == Param::UniformInArclength && curve.chord_spread() > UNIFORM_SPREAD {
            return Err(Error::NotUniform(format!(
                "chord spread {:.3e} exceeds {UNIFORM_SPREAD:e}",
                curve.chord_spread()
            )));
        }
        Ok(curve)
    }

    fn validate_basic(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < MIN_VERTICES {
            return Err(Error::InvalidInput(format!(
                "need at least {MIN_VERTICES} vertices, got {n}"
            )));
        }
        if let Some(i) = self.vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
        }
        if let Some(i) = (0..n).find(|&i| self.chord(i) <= 0.0) {
            return Err(Error::Degenerate(format!(
                "vertices {i} and {} coincide",
                (i + 1) % n
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    /// Vertex with periodic indexing.
    pub fn vertex(&self, i: isize) -> Point {
        let n = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    /// Length of the segment from vertex `i` to vertex `i + 1`.
    pub fn chord(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        (self.vertices[(i + 1) % n] - self.vertices[i]).norm()
    }

    pub fn chords(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.chord(i)).collect()
    }

    /// `max chord / min chord - 1`.
    pub fn chord_spread(&self) -> f64 {
        let (lo, hi) = self
            .chords()
            .into_iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi / lo - 1.0
    }

    /// Sum of chord lengths.
    pub fn polygon_length(&self) -> f64 {
        self.chords().iter().sum()
    }

    /// Shoelace area of the polygon.
    pub fn polygon_area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Mean of the vertices.
    pub fn centroid(&self) -> Point {
        let s = self
            .vertices
            .iter()
            .fold(Point::default(), |acc, &p| acc + p);
        s * (1.0 / self.len() as f64)
    }

    pub fn is_uniform(&self) -> bool {
        self.param == Param::UniformInArclength
    }

    /// Same trace traversed in the opposite direction, starting at the same vertex.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v[1..].reverse();
        Self {
            vertices: v,
            param: self.param,
            generation: self.generation,
        }
    }

    /// Curve scaled about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        self.map_vertices(|p| p * factor)
    }

    pub fn translated(&self, offset: Point) -> Self {
        self.map_vertices(|p| p + offset)
    }

    /// Same polygon with vertex `k` relabelled as vertex 0.
    pub fn rotated_start(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        v.rotate_left(k % self.len());
        Self {
            vertices: v,
            param: self.param,
            generation: self.generation,
        }
    }

    fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            param: self.param,
            generation: self.generation,
        }
    }

    /// Wraps vertices produced by the flow without re-validating uniformity.
    pub(crate) fn from_parts(vertices: Vec<Point>, param: Param, generation: u32) -> Self {
        Self {
            vertices,
            param,
            generation,
        }
    }

    /// Largest distance from a vertex of `self` to the polygon `other`, and back.
    pub fn hausdorff(&self, other: &SampledCurve) -> f64 {
        fn one_way(a: &SampledCurve, b: &SampledCurve) -> f64 {
            a.vertices
                .iter()
                .map(|&p| {
                    (0..b.len())
                        .map(|j| point_segment_distance(p, b.vertices[j], b.vertex(j as isize + 1)))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        }
        one_way(self, other).max(one_way(other, self))
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    let t = if len2 > 0.0 {
        ((p - a).dot(e) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p - (a + e * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(n: usize) -> Vec<Point> {
        let per = n / 4;
        let mut v = Vec::new();
        let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        for s in 0..4 {
            let (ax, ay) = corners[s];
            let (bx, by) = corners[(s + 1) % 4];
            for j in 0..per {
                let t = j as f64 / per as f64;
                v.push(Point::new(ax + t * (bx - ax), ay + t * (by - ay)));
            }
        }
        v
    }

    #[test]
    fn rejects_short_and_nonfinite_input() {
        let few = vec![Point::new(0.0, 0.0); 4];
        assert!(matches!(
            SampledCurve::from_vertices(few),
            Err(Error::InvalidInput(_))
        ));
        let mut v = square(16);
        v[3].x = f64::NAN;
        assert!(SampledCurve::from_vertices(v).is_err());
        let mut v = square(16);
        v[5] = v[4];
        assert!(matches!(
            SampledCurve::from_vertices(v),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn square_polygon_quantities() {
        let c = SampledCurve::from_vertices(square(16)).unwrap();
        assert_eq!(c.param(), Param::UniformInArclength);
        assert!((c.polygon_length() - 4.0).abs() < 1e-14);
        assert!((c.polygon_area() - 1.0).abs() < 1e-14);
        assert!((c.reversed().polygon_area() + 1.0).abs() < 1e-14);
        let centroid = c.centroid();
        assert!((centroid.x - 0.5).abs() < 1e-14 && (centroid.y - 0.5).abs() < 1e-14);
    }

    #[test]
    fn explicit_uniform_tag_is_checked() {
        let mut v = square(16);
        v[1].x = 0.3;
        assert!(matches!(
            SampledCurve::new(v, Param::UniformInArclength, 0),
            Err(Error::NotUniform(_))
        ));
    }

    #[test]
    fn periodic_vertex_indexing() {
        let c = SampledCurve::from_vertices(square(16)).unwrap();
        assert_eq!(c.vertex(-1), c.vertex(15));
        assert_eq!(c.vertex(16), c.vertex(0));
        assert_eq!(c.rotated_start(3).vertex(0), c.vertex(3));
    }

    #[test]
    fn hausdorff_of_translate() {
        let c = SampledCurve::from_vertices(square(16)).unwrap();
        let d = c.hausdorff(&c.translated(Point::new(0.0, 0.25)));
        assert!((d - 0.25).abs() < 1e-12);
        assert_eq!(c.hausdorff(&c), 0.0);
    }
}
