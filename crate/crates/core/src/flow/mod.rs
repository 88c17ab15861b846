//! Time stepping of the curve diffusion flow.
//!
//! Vertices move along the discrete normal by a scalar displacement. The
//! fourth-order part of the velocity is treated implicitly with coefficients
//! frozen at the start of the step, which leads to one symmetric positive
//! definite cyclic pentadiagonal solve per stage. Tangential motion is left
//! to the redistribution policy.

mod band;
mod residuals;
mod run;
mod stepper;

pub use band::{band_multiply, CyclicBandedSpd};
pub use residuals::{identity_residuals, ResidualReport, ResidualSeries};
pub use run::{run, run_with, RunOutcome, Termination};
pub use stepper::{step, StepError, Stepper};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{CurveMetrics, OscTerms, SampledCurve, MIN_VERTICES};

/// Time integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Two linearly implicit Rosenbrock-type stages with spacing and normals
    /// frozen at the start of the step. Freezing keeps the area flux of the
    /// update zero but limits the scheme to first order in time, with about a
    /// third of the error of the one-stage variant.
    LinearlyImplicit,
    /// One linearly implicit Euler stage, first order in time.
    LinearlyImplicitEuler,
    /// Classical explicit Runge-Kutta; stable only for `dt = O(h^4)`.
    ExplicitRk4,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::LinearlyImplicit => "linearly-implicit",
            Scheme::LinearlyImplicitEuler => "linearly-implicit-euler",
            Scheme::ExplicitRk4 => "explicit-rk4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Scheme::LinearlyImplicit,
            Scheme::LinearlyImplicitEuler,
            Scheme::ExplicitRk4,
        ]
        .into_iter()
        .find(|v| v.name() == s)
    }
}

/// When vertices are moved back to equal arc-length spacing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Redistribution {
    EveryStep,
    /// Resample once the relative chord spread exceeds the threshold.
    WhenSpreadExceeds(f64),
}

/// Conditions ending a run. The run stops at the first one reached.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopConditions {
    pub max_time: Option<f64>,
    pub max_steps: Option<u64>,
    /// Stop once the oscillation energy falls below this value.
    pub kosc_below: Option<f64>,
    /// Blow-up when `integral k^2 ds` exceeds this value.
    pub k2_ceiling: f64,
    /// Blow-up when a chord falls below this fraction of `L / n`.
    pub min_segment_ratio: f64,
    /// Blow-up when one step shortens the curve by more than this fraction,
    /// or lengthens it by more than `1e-8` relative: the step size no longer
    /// resolves the evolution.
    pub max_length_drop: f64,
}

impl Default for StopConditions {
    fn default() -> Self {
        Self {
            max_time: Some(1.0),
            max_steps: None,
            kosc_below: None,
            k2_ceiling: 1e6,
            min_segment_ratio: 1e-3,
            max_length_drop: 0.05,
        }
    }
}

/// Solver settings for a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub n: usize,
    pub dt: f64,
    pub scheme: Scheme,
    pub redistribution: Redistribution,
    pub stop: StopConditions,
    /// Largest accepted relative residual of a linear solve.
    pub solve_tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            n: 256,
            dt: 1e-4,
            scheme: Scheme::LinearlyImplicit,
            redistribution: Redistribution::EveryStep,
            stop: StopConditions::default(),
            solve_tol: 1e-8,
        }
    }
}

impl FlowConfig {
    pub fn with_max_time(mut self, t: f64) -> Self {
        self.stop.max_time = Some(t);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_VERTICES {
            return invalid(format!("n must be at least {MIN_VERTICES}, got {}", self.n));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return invalid(format!("dt must be positive, got {}", self.dt));
        }
        if let Redistribution::WhenSpreadExceeds(theta) = self.redistribution {
            if !(theta > 0.0 && theta < 1.0) {
                return invalid(format!("spread threshold must lie in (0, 1), got {theta}"));
            }
        }
        let s = &self.stop;
        if s.max_time.is_none() && s.max_steps.is_none() {
            return invalid("a run needs max_time or max_steps");
        }
        if let Some(t) = s.max_time {
            if !(t.is_finite() && t >= 0.0) {
                return invalid(format!("max_time must be finite and nonnegative, got {t}"));
            }
        }
        if !(s.k2_ceiling > 0.0) {
            return invalid("k2_ceiling must be positive");
        }
        if !(s.min_segment_ratio > 0.0 && s.min_segment_ratio < 1.0) {
            return invalid("min_segment_ratio must lie in (0, 1)");
        }
        if !(s.max_length_drop > 0.0 && s.max_length_drop < 1.0) {
            return invalid("max_length_drop must lie in (0, 1)");
        }
        if !(self.solve_tol > 0.0) {
            return invalid("solve_tol must be positive");
        }
        Ok(())
    }
}

/// A curve at a point in simulated time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub curve: SampledCurve,
    pub time: f64,
    pub step_index: u64,
}

impl FlowState {
    pub fn new(curve: SampledCurve) -> Self {
        Self {
            curve,
            time: 0.0,
            step_index: 0,
        }
    }
}

/// Diagnostics for one state of a run.
///
/// Record 0 describes the initial curve and carries zero rates; record `j`
/// describes the state after step `j` with rates taken across that step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub step: u64,
    pub metrics: CurveMetrics,
    pub osc: OscTerms,
    pub dl_dt: f64,
    pub da_dt: f64,
    pub dkosc_dt: f64,
    /// Largest relative residual of the linear solves in the step.
    pub residual: f64,
}

#[derive(Serialize)]
struct RecordLine {
    t: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "I")]
    i: Option<f64>,
    omega: i64,
    kbar: f64,
    kosc: f64,
    ks2: f64,
    kss2: f64,
    kmin: f64,
    #[serde(rename = "dL_dt")]
    dl_dt: f64,
    #[serde(rename = "dA_dt")]
    da_dt: f64,
    residual: f64,
}

impl TrajectoryRecord {
    /// One JSON object with the fixed trajectory field names.
    pub fn to_json_line(&self) -> String {
        let m = &self.metrics;
        let line = RecordLine {
            t: self.t,
            l: m.length,
            a: m.signed_area,
            i: m.isoperimetric_ratio,
            omega: m.winding_number,
            kbar: m.average_curvature,
            kosc: m.osc_energy,
            ks2: m.ks_norm_sq,
            kss2: m.kss_norm_sq,
            kmin: m.min_curvature,
            dl_dt: self.dl_dt,
            da_dt: self.da_dt,
            residual: self.residual,
        };
        serde_json::to_string(&line).expect("record fields serialize")
    }
}
