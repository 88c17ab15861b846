//! One time step of the flow.
//!
//! With fluxes `F[i] = (f[i+1] - f[i]) / h[i]` let `G f = F[i] - F[i-1]`,
//! `S f = G f / mass` (the velocity `-S k` has zero area flux) and
//! `T f = G f / d` (linearized curvature response). The implicit operator
//! `I + a S T` is symmetric after scaling by `mass`:
//! `mass + a G diag(1/d) G`, which is what gets factored.

use super::band::{band_multiply, CyclicBandedSpd};
use super::{FlowConfig, FlowState, Redistribution, Scheme};
use crate::error::Error;
use crate::geometry::{measure, CurveMetrics, Frame, OscTerms, Param, Point, Resampler, SampledCurve};

/// Why a step was not accepted.
#[derive(Debug)]
pub enum StepError {
    /// Numerical failure unrelated to the geometry.
    Fatal(Error),
    /// Curvature or mesh degeneration; the input state is the last good one.
    BlowUp(String),
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        StepError::Fatal(e)
    }
}

impl std::fmt::Display for StepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepError::Fatal(e) => write!(f, "{e}"),
            StepError::BlowUp(r) => write!(f, "blow-up: {r}"),
        }
    }
}

impl std::error::Error for StepError {}

/// Measured quantities of an accepted state.
#[derive(Clone, Copy, Debug)]
pub struct Measured {
    pub metrics: CurveMetrics,
    pub osc: OscTerms,
    pub residual: f64,
}

struct Operator {
    bands: Vec<Vec<f64>>,
    solver: CyclicBandedSpd,
}

impl Operator {
    /// Factors `mass + a G diag(1/d) G`.
    fn new(frame: &Frame, a: f64) -> Result<Self, Error> {
        let n = frame.len();
        let mut bands = vec![vec![0.0; n]; 3];
        for l in 0..n {
            let lm = (l + n - 1) % n;
            let g = [
                1.0 / frame.h[lm],
                -(1.0 / frame.h[l] + 1.0 / frame.h[lm]),
                1.0 / frame.h[l],
            ];
            let s = a / frame.d[l];
            for o1 in 0..3 {
                for o2 in o1..3 {
                    let row = (l + n + o1 - 1) % n;
                    bands[o2 - o1][row] += s * g[o1] * g[o2];
                }
            }
        }
        for (b, m) in bands[0].iter_mut().zip(&frame.mass) {
            *b += m;
        }
        let solver = CyclicBandedSpd::factor(&bands)?;
        Ok(Self { bands, solver })
    }

    /// Solves and returns the componentwise backward error
    /// `max |A x - b| / max (|A| |x| + |b|)`.
    fn solve(&self, rhs: &[f64]) -> (Vec<f64>, f64) {
        let mut x = rhs.to_vec();
        self.solver.solve(&mut x);
        let ax = band_multiply(&self.bands, &x);
        let abs_bands: Vec<Vec<f64>> = self
            .bands
            .iter()
            .map(|b| b.iter().map(|v| v.abs()).collect())
            .collect();
        let abs_x: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        let scale = band_multiply(&abs_bands, &abs_x)
            .iter()
            .zip(rhs)
            .fold(0.0f64, |m, (a, b)| m.max(a + b.abs()));
        let err = ax
            .iter()
            .zip(rhs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let rel = if scale > 0.0 { err / scale } else { 0.0 };
        (x, rel)
    }
}

/// `G f` with the spacing of `frame`.
fn divergence(frame: &Frame, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let flux: Vec<f64> = (0..n).map(|i| (f[(i + 1) % n] - f[i]) / frame.h[i]).collect();
    (0..n).map(|i| flux[i] - flux[(i + n - 1) % n]).collect()
}

fn displace(v: &[Point], nu: &[Point], delta: &[f64]) -> Vec<Point> {
    v.iter()
        .zip(nu)
        .zip(delta)
        .map(|((p, n), d)| *p + *n * *d)
        .collect()
}

fn all_finite(v: &[Point]) -> bool {
    v.iter().all(|p| p.is_finite())
}

/// Normal velocity `-S k` of a polygon.
fn velocity(v: &[Point]) -> (Frame, Vec<f64>) {
    let frame = Frame::new(v);
    let vel = frame
        .second_difference(&frame.k, &frame.mass)
        .into_iter()
        .map(|x| -x)
        .collect();
    (frame, vel)
}

/// Advances states and owns the scratch resources of a run.
#[derive(Debug)]
pub struct Stepper {
    config: FlowConfig,
    resampler: Resampler,
}

const ROS_GAMMA: f64 = 1.0 + std::f64::consts::FRAC_1_SQRT_2;

impl Stepper {
    pub fn new(config: FlowConfig) -> Result<Self, Error> {
        config.validate()?;
        Ok(Self {
            config,
            resampler: Resampler::new(),
        })
    }

    pub fn config(&self) -> &FlowConfig {
        &self.config
    }

    /// Brings a curve to the configured vertex count and equal spacing.
    pub fn prepare(&mut self, curve: &SampledCurve) -> Result<SampledCurve, Error> {
        if curve.len() == self.config.n && curve.is_uniform() {
            Ok(curve.clone())
        } else {
            self.resampler.resample(curve, self.config.n)
        }
    }

    /// Measures a state, treating degeneration as blow-up.
    pub fn measure(&self, curve: &SampledCurve) -> Result<Measured, StepError> {
        let (metrics, osc, _) = measure(curve).map_err(|e| match e {
            Error::WindingNotInteger(w) => {
                StepError::BlowUp(format!("turning sum lost integrality ({w})"))
            }
            other => StepError::Fatal(other),
        })?;
        if !(osc.k2.is_finite() && metrics.osc_energy.is_finite()) {
            return Err(StepError::BlowUp("non-finite curvature".into()));
        }
        if osc.k2 > self.config.stop.k2_ceiling {
            return Err(StepError::BlowUp(format!(
                "integral of k^2 = {:.3e} exceeds ceiling {:.3e}",
                osc.k2, self.config.stop.k2_ceiling
            )));
        }
        Ok(Measured {
            metrics,
            osc,
            residual: 0.0,
        })
    }

    /// Moves the vertices of `v` by one step; returns the new vertices and
    /// the largest linear-solve residual.
    fn normal_step(&self, v: &[Point]) -> Result<(Vec<Point>, f64), Error> {
        let dt = self.config.dt;
        match self.config.scheme {
            Scheme::LinearlyImplicitEuler => {
                let frame = Frame::new(v);
                let op = Operator::new(&frame, dt)?;
                let rhs: Vec<f64> = divergence(&frame, &frame.k).iter().map(|g| -dt * g).collect();
                let (delta, res) = op.solve(&rhs);
                Ok((displace(v, &frame.nu, &delta), res))
            }
            Scheme::LinearlyImplicit => {
                let frame = Frame::new(v);
                let op = Operator::new(&frame, ROS_GAMMA * dt)?;
                let rhs1: Vec<f64> = divergence(&frame, &frame.k).iter().map(|g| -g).collect();
                let (k1, r1) = op.solve(&rhs1);
                let mid = displace(v, &frame.nu, &k1.iter().map(|x| x * dt).collect::<Vec<_>>());
                if !all_finite(&mid) {
                    return Err(Error::Solver("non-finite stage value".into()));
                }
                // Stage two reuses the frozen spacing so that the update keeps
                // zero area flux; only the curvature is re-evaluated.
                let k_mid = Frame::new(&mid).k;
                let rhs2: Vec<f64> = divergence(&frame, &k_mid)
                    .iter()
                    .zip(&k1)
                    .zip(&frame.mass)
                    .map(|((g, k1), m)| -g - 2.0 * m * k1)
                    .collect();
                let (k2, r2) = op.solve(&rhs2);
                let delta: Vec<f64> = k1
                    .iter()
                    .zip(&k2)
                    .map(|(a, b)| dt * (1.5 * a + 0.5 * b))
                    .collect();
                Ok((displace(v, &frame.nu, &delta), r1.max(r2)))
            }
            Scheme::ExplicitRk4 => {
                let stage = |base: &[Point], dir: &[Point], scale: f64| -> Vec<Point> {
                    base.iter().zip(dir).map(|(p, d)| *p + *d * scale).collect()
                };
                let rate = |x: &[Point]| -> Vec<Point> {
                    let (frame, vel) = velocity(x);
                    frame.nu.iter().zip(&vel).map(|(n, s)| *n * *s).collect()
                };
                let r1 = rate(v);
                let r2 = rate(&stage(v, &r1, 0.5 * dt));
                let r3 = rate(&stage(v, &r2, 0.5 * dt));
                let r4 = rate(&stage(v, &r3, dt));
                let out = (0..v.len())
                    .map(|i| v[i] + (r1[i] + r2[i] * 2.0 + r3[i] * 2.0 + r4[i]) * (dt / 6.0))
                    .collect();
                Ok((out, 0.0))
            }
        }
    }

    /// Advances `state` by one step of size `dt`, then redistributes.
    pub fn advance(&mut self, state: &FlowState) -> Result<(FlowState, Measured), StepError> {
        let curve = &state.curve;
        let (moved, residual) = self.normal_step(curve.vertices())?;
        if residual > self.config.solve_tol {
            return Err(StepError::Fatal(Error::Solver(format!(
                "relative residual {residual:.3e} above tolerance {:.3e}",
                self.config.solve_tol
            ))));
        }
        if !all_finite(&moved) {
            return Err(StepError::BlowUp("non-finite vertex".into()));
        }
        let n = moved.len();
        let chords: Vec<f64> = (0..n).map(|i| (moved[(i + 1) % n] - moved[i]).norm()).collect();
        let total: f64 = chords.iter().sum();
        let shortest = chords.iter().copied().fold(f64::INFINITY, f64::min);
        if !(shortest >= self.config.stop.min_segment_ratio * total / n as f64) {
            return Err(StepError::BlowUp(format!(
                "segment collapsed to {shortest:.3e} (mean {:.3e})",
                total / n as f64
            )));
        }
        let raw = SampledCurve::from_parts(moved, Param::UniformInParameter, curve.generation());
        let resample = match self.config.redistribution {
            Redistribution::EveryStep => true,
            Redistribution::WhenSpreadExceeds(theta) => raw.chord_spread() > theta,
        };
        let next = if resample {
            self.resampler.resample(&raw, self.config.n).map_err(|e| match e {
                Error::Degenerate(msg) => StepError::BlowUp(msg),
                other => StepError::Fatal(other),
            })?
        } else {
            let spread = raw.chord_spread();
            let param = if spread <= crate::geometry::UNIFORM_SPREAD {
                Param::UniformInArclength
            } else {
                Param::UniformInParameter
            };
            SampledCurve::from_parts(raw.into_vertices(), param, curve.generation())
        };
        let mut measured = self.measure(&next)?;
        measured.residual = residual;
        let step_index = state.step_index + 1;
        Ok((
            FlowState {
                curve: next,
                time: step_index as f64 * self.config.dt,
                step_index,
            },
            measured,
        ))
    }
}

/// Advances `state` by one step with a fresh [`Stepper`].
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState, StepError> {
    let mut stepper = Stepper::new(*config)?;
    stepper.advance(state).map(|(s, _)| s)
}
