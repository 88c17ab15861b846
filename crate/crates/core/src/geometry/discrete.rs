//! Per-vertex discrete geometry of a closed polygon.

use super::{Point, SampledCurve};
use crate::error::{Error, Result};

/// Local geometry at every vertex of a polygon.
///
/// Index conventions: `h[i] = |X[i+1] - X[i]|`, `d[i] = (h[i-1] + h[i]) / 2`,
/// `phi[i]` is the signed turning angle at vertex `i` and
/// `k[i] = 2 sin(phi[i] / 2) / d[i]`, which is exact on any circle inscribed
/// with equal chords. `nu[i]` is the unit normal `J (X[i+1] - X[i-1])`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub h: Vec<f64>,
    pub d: Vec<f64>,
    /// `|X[i+1] - X[i-1]| / 2`, the area weight of a normal vertex move.
    pub mass: Vec<f64>,
    pub nu: Vec<Point>,
    pub phi: Vec<f64>,
    pub k: Vec<f64>,
}

impl Frame {
    pub fn new(v: &[Point]) -> Self {
        let n = v.len();
        let e: Vec<Point> = (0..n).map(|i| v[(i + 1) % n] - v[i]).collect();
        let h: Vec<f64> = e.iter().map(|p| p.norm()).collect();
        let mut d = vec![0.0; n];
        let mut mass = vec![0.0; n];
        let mut nu = vec![Point::default(); n];
        let mut phi = vec![0.0; n];
        let mut k = vec![0.0; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let c = v[(i + 1) % n] - v[im];
            let cl = c.norm();
            d[i] = 0.5 * (h[i] + h[im]);
            mass[i] = 0.5 * cl;
            nu[i] = c.perp() * (1.0 / cl);
            phi[i] = e[im].cross(e[i]).atan2(e[im].dot(e[i]));
            k[i] = 2.0 * (0.5 * phi[i]).sin() / d[i];
        }
        Self {
            h,
            d,
            mass,
            nu,
            phi,
            k,
        }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// Divergence-form second difference `(F[i] - F[i-1]) / w[i]` with
    /// fluxes `F[i] = (f[i+1] - f[i]) / h[i]`. With `w = d` this is the arc
    /// length second derivative; with `w = mass` it conserves `sum(mass * out)`.
    pub fn second_difference(&self, f: &[f64], w: &[f64]) -> Vec<f64> {
        let n = f.len();
        let flux: Vec<f64> = (0..n).map(|i| (f[(i + 1) % n] - f[i]) / self.h[i]).collect();
        (0..n)
            .map(|i| (flux[i] - flux[(i + n - 1) % n]) / w[i])
            .collect()
    }

    /// Vertex-centred first difference `(f[i+1] - f[i-1]) / (h[i-1] + h[i])`.
    pub fn central_difference(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        (0..n)
            .map(|i| {
                let im = (i + n - 1) % n;
                (f[(i + 1) % n] - f[im]) / (self.h[im] + self.h[i])
            })
            .collect()
    }
}

fn require_uniform(curve: &SampledCurve) -> Result<()> {
    if curve.is_uniform() {
        Ok(())
    } else {
        Err(Error::NotUniform(format!(
            "chord spread {:.3e}",
            curve.chord_spread()
        )))
    }
}

/// Signed curvature at every vertex of a curve that is uniform in arc length.
pub fn curvature_profile(curve: &SampledCurve) -> Result<Vec<f64>> {
    require_uniform(curve)?;
    Ok(Frame::new(curve.vertices()).k)
}

/// First (`order = 1`) or second (`order = 2`) arc-length derivative of the
/// curvature at every vertex.
pub fn curvature_derivatives(curve: &SampledCurve, order: u8) -> Result<Vec<f64>> {
    require_uniform(curve)?;
    let frame = Frame::new(curve.vertices());
    match order {
        1 => Ok(frame.central_difference(&frame.k)),
        2 => Ok(frame.second_difference(&frame.k, &frame.d)),
        _ => Err(Error::InvalidInput(format!(
            "derivative order must be 1 or 2, got {order}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, resample_uniform, ShapeSpec};

    #[test]
    fn circle_curvature_is_inverse_radius() {
        for (r, expect) in [(1.0, 1.0), (2.0, 0.5)] {
            let c = generate(&ShapeSpec::circle(r), 256).unwrap();
            for k in curvature_profile(&c).unwrap() {
                assert!((k - expect).abs() < 1e-12, "{k}");
            }
            for order in [1, 2] {
                let ks = curvature_derivatives(&c, order).unwrap();
                assert!(ks.iter().all(|v| v.abs() < 1e-6));
            }
        }
    }

    #[test]
    fn ellipse_vertex_curvature() {
        let c = resample_uniform(&generate(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 256).unwrap(), 256)
            .unwrap();
        let k = curvature_profile(&c).unwrap();
        let i = (0..c.len())
            .min_by(|&a, &b| {
                let da = (c.vertices()[a] - Point::new(2.0, 0.0)).norm();
                let db = (c.vertices()[b] - Point::new(2.0, 0.0)).norm();
                da.total_cmp(&db)
            })
            .unwrap();
        assert!((k[i] - 2.0).abs() < 1e-2, "{}", k[i]);
    }

    #[test]
    fn non_uniform_curve_is_a_contract_error() {
        let c = generate(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 64).unwrap();
        assert!(matches!(curvature_profile(&c), Err(Error::NotUniform(_))));
        let u = resample_uniform(&c, 64).unwrap();
        assert!(matches!(
            curvature_derivatives(&u, 3),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn mass_weighted_difference_sums_to_zero() {
        let c = generate(&ShapeSpec::Ellipse { a: 1.3, b: 0.7 }, 40).unwrap();
        let f = Frame::new(c.vertices());
        let s = f.second_difference(&f.k, &f.mass);
        let total: f64 = s.iter().zip(&f.mass).map(|(a, m)| a * m).sum();
        assert!(total.abs() < 1e-12);
    }
}
