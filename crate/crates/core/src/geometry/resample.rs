//! Equal-chord resampling through the trigonometric interpolant.
//!
//! The vertices are treated as samples of a periodic function of the vertex
//! index. Its trigonometric interpolant is tabulated on a zero-padded grid,
//! evaluated between grid points by local Lagrange interpolation, and the new
//! vertices are placed on it so that all chords are equal. Vertex 0 is kept.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::{Param, Point, SampledCurve, MIN_VERTICES};
use crate::error::{Error, Result};

const OVERSAMPLE: usize = 16;
const STENCIL: usize = 8;
const MAX_ITER: usize = 60;
const TARGET_SPREAD: f64 = 1e-13;

/// Reusable resampler holding FFT plans across calls.
pub struct Resampler {
    planner: FftPlanner<f64>,
}

impl Default for Resampler {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Resampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Resampler")
    }
}

impl Resampler {
    pub fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
        }
    }

    /// Places `n` vertices with equal chords on the interpolated trace of `curve`.
    pub fn resample(&mut self, curve: &SampledCurve, n: usize) -> Result<SampledCurve> {
        if n < MIN_VERTICES {
            return Err(Error::InvalidInput(format!(
                "need at least {MIN_VERTICES} vertices, got {n}"
            )));
        }
        let len = curve.polygon_length();
        let size = curve.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max);
        if !len.is_finite() || len <= 1e-12 * size {
            return Err(Error::Degenerate(format!("curve length {len:e} too small")));
        }
        let fine = self.fine_grid(curve.vertices(), n);
        let vertices = fine.equal_chords(n)?;
        SampledCurve::new(vertices, Param::UniformInArclength, curve.generation() + 1)
    }

    fn fine_grid(&mut self, v: &[Point], n: usize) -> FineGrid {
        let big_n = v.len();
        let m = OVERSAMPLE * big_n.max(n);
        let mut c: Vec<Complex64> = v.iter().map(|p| Complex64::new(p.x, p.y)).collect();
        self.planner.plan_fft_forward(big_n).process(&mut c);
        let inv_n = 1.0 / big_n as f64;
        let mut z = vec![Complex64::new(0.0, 0.0); m];
        let mut dz = vec![Complex64::new(0.0, 0.0); m];
        for (j, cj) in c.iter().enumerate() {
            let cj = cj * inv_n;
            let freq = if j <= big_n / 2 {
                j as i64
            } else {
                j as i64 - big_n as i64
            };
            if big_n % 2 == 0 && j == big_n / 2 {
                let half = (big_n / 2) as i64;
                for f in [half, -half] {
                    let slot = f.rem_euclid(m as i64) as usize;
                    z[slot] += cj * 0.5;
                    dz[slot] += cj * Complex64::new(0.0, 0.5 * f as f64);
                }
            } else {
                let slot = freq.rem_euclid(m as i64) as usize;
                z[slot] += cj;
                dz[slot] += cj * Complex64::new(0.0, freq as f64);
            }
        }
        let inverse = self.planner.plan_fft_inverse(m);
        inverse.process(&mut z);
        inverse.process(&mut dz);
        let speed = dz.iter().map(|w| w.norm()).collect();
        FineGrid { z, speed }
    }
}

/// Trigonometric interpolant tabulated on `m` equally spaced parameters.
struct FineGrid {
    z: Vec<Complex64>,
    speed: Vec<f64>,
}

impl FineGrid {
    fn m(&self) -> usize {
        self.z.len()
    }

    fn weights(&self, u: f64) -> (i64, [f64; STENCIL]) {
        let x = u / (2.0 * PI) * self.m() as f64;
        let i0 = x.floor() as i64 - (STENCIL as i64 / 2 - 1);
        let mut w = [1.0; STENCIL];
        for (q, wq) in w.iter_mut().enumerate() {
            for r in 0..STENCIL {
                if r != q {
                    *wq *= (x - (i0 + r as i64) as f64) / (q as f64 - r as f64);
                }
            }
        }
        (i0, w)
    }

    fn eval_point(&self, u: f64) -> Point {
        let (i0, w) = self.weights(u);
        let m = self.m() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, wq) in w.iter().enumerate() {
            acc += self.z[(i0 + q as i64).rem_euclid(m) as usize] * *wq;
        }
        Point::new(acc.re, acc.im)
    }

    fn eval_speed(&self, u: f64) -> f64 {
        let (i0, w) = self.weights(u);
        let m = self.m() as i64;
        w.iter()
            .enumerate()
            .map(|(q, wq)| self.speed[(i0 + q as i64).rem_euclid(m) as usize] * wq)
            .sum()
    }

    fn equal_chords(&self, n: usize) -> Result<Vec<Point>> {
        let m = self.m();
        let du = 2.0 * PI / m as f64;
        let mut s = Vec::with_capacity(m + 1);
        s.push(0.0);
        for j in 0..m {
            let next = self.speed[(j + 1) % m];
            s.push(s[j] + 0.5 * (self.speed[j] + next) * du);
        }
        let total = s[m];
        let mut u: Vec<f64> = (0..n)
            .map(|i| {
                let target = i as f64 * total / n as f64;
                let j = s.partition_point(|&v| v <= target).clamp(1, m) - 1;
                let frac = (target - s[j]) / (s[j + 1] - s[j]);
                (j as f64 + frac) * du
            })
            .collect();

        let mut best = (f64::INFINITY, Vec::new());
        for _ in 0..MAX_ITER {
            let pts: Vec<Point> = u.iter().map(|&t| self.eval_point(t)).collect();
            let chords: Vec<f64> = (0..n).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).collect();
            let (lo, hi) = chords
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
            let spread = hi / lo - 1.0;
            if spread < best.0 {
                best = (spread, pts);
            }
            if spread < TARGET_SPREAD {
                break;
            }
            let perimeter: f64 = chords.iter().sum();
            let mut acc = 0.0;
            for i in 0..n {
                let target = i as f64 * perimeter / n as f64;
                u[i] += (target - acc) / self.eval_speed(u[i]);
                acc += chords[i];
            }
        }
        if best.0 > super::UNIFORM_SPREAD || !best.0.is_finite() {
            return Err(Error::Degenerate(format!(
                "equal-chord placement did not converge (spread {:.3e})",
                best.0
            )));
        }
        Ok(best.1)
    }
}

/// Resamples `curve` to `n` vertices equally spaced in arc length.
pub fn resample_uniform(curve: &SampledCurve, n: usize) -> Result<SampledCurve> {
    Resampler::new().resample(curve, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, ShapeSpec};

    #[test]
    fn clustered_circle_becomes_uniform() {
        let n = 256;
        let v: Vec<Point> = (0..n)
            .map(|j| {
                let s = j as f64 / n as f64;
                let t = 2.0 * PI * (s + 0.08 * (2.0 * PI * s).sin());
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let c = SampledCurve::from_vertices(v).unwrap();
        assert_eq!(c.param(), Param::UniformInParameter);
        let r = resample_uniform(&c, n).unwrap();
        assert_eq!(r.generation(), 1);
        assert!(r.chord_spread() < 1e-12);
        let expect = 2.0 * n as f64 * (PI / n as f64).sin();
        assert!((r.polygon_length() - expect).abs() < 1e-6);
    }

    #[test]
    fn uniform_input_is_a_fixed_point() {
        let c = generate(&ShapeSpec::circle(1.0), 128).unwrap();
        let r = resample_uniform(&c, 128).unwrap();
        let moved = c
            .vertices()
            .iter()
            .zip(r.vertices())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        assert!(moved < 1e-10, "{moved}");
    }

    #[test]
    fn changes_vertex_count() {
        let c = generate(&ShapeSpec::Ellipse { a: 1.5, b: 1.0 }, 64).unwrap();
        let r = resample_uniform(&c, 100).unwrap();
        assert_eq!(r.len(), 100);
        assert!(r.chord_spread() < 1e-12);
        assert_eq!(r.vertices()[0], c.vertices()[0]);
    }

    #[test]
    fn odd_vertex_count() {
        let c = generate(&ShapeSpec::Ellipse { a: 1.5, b: 1.0 }, 63).unwrap();
        let r = resample_uniform(&c, 63).unwrap();
        assert!(r.chord_spread() < 1e-12);
    }
}
