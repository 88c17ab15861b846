//! Simulation and analysis of the curve diffusion flow for closed plane curves.
//!
//! A closed curve moves with normal velocity `-k_ss`, the H^-1 gradient flow of
//! length. The crate provides:
//!
//! * [`geometry`]: sampled curves, shape generators, arc-length resampling and
//!   the discrete curvature quantities `L, A, I, omega, kbar, K_osc, |k_s|^2,
//!   |k_ss|^2`.
//! * [`flow`]: a linearly implicit time stepper with redistribution, a run loop
//!   emitting one [`flow::TrajectoryRecord`] per step, and residuals of the
//!   evolution identities along a trajectory.
//! * [`analysis`]: the smallness constant `K*`, hypothesis checks, trajectory
//!   bounds, the density identity at a self-intersection, and the Wirtinger and
//!   Newton inequality checks.
//! * [`intersections`]: segment crossing detection, clustering and multiplicity.
//! * [`io`]: curve CSV, trajectory JSON lines and atomic file writes.

pub mod analysis;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod intersections;
pub mod io;
pub mod suites;

pub use error::{Error, Result};
pub use flow::{FlowConfig, FlowState, Redistribution, RunOutcome, Scheme, StopConditions, Termination, TrajectoryRecord};
pub use geometry::{CurveMetrics, Param, Point, SampledCurve, ShapeSpec};
pub use intersections::CrossingSet;
