use serde::{Deserialize, Serialize};

use super::stepper::{Measured, StepError, Stepper};
use super::{FlowConfig, FlowState, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::geometry::SampledCurve;

/// Why a run ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", content = "detail", rename_all = "kebab-case")]
pub enum Termination {
    MaxTime,
    MaxSteps,
    KoscBelow,
    BlowUp(String),
}

impl Termination {
    pub fn is_blow_up(&self) -> bool {
        matches!(self, Termination::BlowUp(_))
    }
}

/// Trajectory, final state and termination reason of a run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub records: Vec<TrajectoryRecord>,
    /// Last accepted state.
    pub final_state: FlowState,
    pub termination: Termination,
}

fn record(state: &FlowState, m: &Measured, prev: Option<&TrajectoryRecord>, dt: f64) -> TrajectoryRecord {
    let rate = |now: f64, before: f64| (now - before) / dt;
    let (dl_dt, da_dt, dkosc_dt) = match prev {
        Some(p) => (
            rate(m.metrics.length, p.metrics.length),
            rate(m.metrics.signed_area, p.metrics.signed_area),
            rate(m.metrics.osc_energy, p.metrics.osc_energy),
        ),
        None => (0.0, 0.0, 0.0),
    };
    TrajectoryRecord {
        t: state.time,
        step: state.step_index,
        metrics: m.metrics,
        osc: m.osc,
        dl_dt,
        da_dt,
        dkosc_dt,
        residual: m.residual,
    }
}

/// Relative length increase in one step that is treated as a failed step.
const LENGTH_GROWTH_SLACK: f64 = 1e-8;

fn state_length(records: &[TrajectoryRecord]) -> f64 {
    records.last().map_or(f64::NAN, |r| r.metrics.length)
}

/// Runs the flow from `initial` until a stop condition fires.
pub fn run(initial: &SampledCurve, config: &FlowConfig) -> Result<RunOutcome> {
    run_with(initial, config, |_, _| {})
}

/// Like [`run`], calling `observe` for every recorded state including the first.
pub fn run_with(
    initial: &SampledCurve,
    config: &FlowConfig,
    mut observe: impl FnMut(&FlowState, &TrajectoryRecord),
) -> Result<RunOutcome> {
    let mut stepper = Stepper::new(*config)?;
    let mut state = FlowState::new(stepper.prepare(initial)?);
    let first = stepper.measure(&state.curve).map_err(|e| match e {
        StepError::Fatal(e) => e,
        StepError::BlowUp(r) => Error::Degenerate(format!("initial curve: {r}")),
    })?;
    let omega0 = first.metrics.winding_number;
    let mut records = vec![record(&state, &first, None, config.dt)];
    observe(&state, &records[0]);

    let stop = config.stop;
    let max_steps = stop.max_steps.unwrap_or(u64::MAX);
    let time_steps = stop
        .max_time
        .map(|t| (t / config.dt - 1e-9).ceil().max(0.0) as u64)
        .unwrap_or(u64::MAX);
    let termination = loop {
        if let Some(level) = stop.kosc_below {
            if records.last().is_some_and(|r| r.metrics.osc_energy < level) {
                break Termination::KoscBelow;
            }
        }
        if state.step_index >= time_steps {
            break Termination::MaxTime;
        }
        if state.step_index >= max_steps {
            break Termination::MaxSteps;
        }
        match stepper.advance(&state) {
            Ok((next, measured)) => {
                if measured.metrics.winding_number != omega0 {
                    break Termination::BlowUp(format!(
                        "winding number changed from {omega0} to {}",
                        measured.metrics.winding_number
                    ));
                }
                let (l_prev, l_next) = (state_length(&records), measured.metrics.length);
                if l_next > l_prev * (1.0 + LENGTH_GROWTH_SLACK) {
                    break Termination::BlowUp(format!(
                        "length grew from {l_prev:.6e} to {l_next:.6e} in one step"
                    ));
                }
                if l_next < l_prev * (1.0 - stop.max_length_drop) {
                    break Termination::BlowUp(format!(
                        "length fell from {l_prev:.6e} to {l_next:.6e} in one step"
                    ));
                }
                let rec = record(&next, &measured, records.last(), config.dt);
                observe(&next, &rec);
                records.push(rec);
                state = next;
            }
            Err(StepError::BlowUp(reason)) => break Termination::BlowUp(reason),
            Err(StepError::Fatal(e)) => return Err(e),
        }
    };
    Ok(RunOutcome {
        records,
        final_state: state,
        termination,
    })
}
