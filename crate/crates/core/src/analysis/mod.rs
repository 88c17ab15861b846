//! Estimates, thresholds and inequality checks.
//!
//! Everything here is a pure function of curves, metrics or recorded
//! trajectories. Checks return typed results; [`Report`] is the common
//! serialized form with named verdicts and named values.

mod constants;
mod density;
mod hypotheses;
mod inequalities;
mod roundness;
mod trajectory;

pub use constants::{general_smallness_threshold, isoperimetric_threshold, kstar, EMBEDDED_THRESHOLD};
pub use density::{density_integral, DensityReport};
pub use hypotheses::{
    certificate_from_metrics, check_hypotheses, embeddedness_certificate, multiplicity_bound,
    multiplicity_check, Certificate, HypothesisReport, MultiplicityCheck,
};
pub use inequalities::{
    curve_wirtinger_check, elementary_symmetric, harmonic_sum_bound_check, newton_ratio_check, wirtinger_check,
    InequalityVerdict, WirtingerReport, CURVE_WIRTINGER_SLACK, ROUNDING_GUARD,
};
pub use roundness::{area_centroid, roundness, RoundnessReport};
pub use trajectory::{
    decay_fit, kss_rate_floor, l1_energy_check, positivity_waiting_measure,
    smallness_propagation_check, waiting_time_bound, waiting_time_check, DecayFit, DecayQuantity,
    L1EnergyReport, SmallnessReport, WaitingTimeReport, DECAY_FLOOR, SMALLNESS_SLACK,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Named verdicts and values of one check.
///
/// `verdicts` hold hard pass/fail outcomes; `advisory` holds outcomes that are
/// reported but do not decide [`Report::passed`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub verdicts: BTreeMap<String, bool>,
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub advisory: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn verdict(mut self, key: &str, ok: bool) -> Self {
        self.verdicts.insert(key.to_string(), ok);
        self
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn advise(mut self, key: &str, ok: bool) -> Self {
        self.advisory.insert(key.to_string(), ok);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// True when every hard verdict holds.
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    /// Plain-text table of the report.
    pub fn to_table(&self) -> String {
        let width = self
            .verdicts
            .keys()
            .chain(self.values.keys())
            .chain(self.advisory.keys())
            .map(|k| k.len())
            .max()
            .unwrap_or(0);
        let mut out = format!("[{}]\n", self.name);
        for (k, v) in &self.values {
            let _ = writeln!(out, "  {k:<width$}  {v:.6e}");
        }
        for (k, v) in &self.verdicts {
            let _ = writeln!(out, "  {k:<width$}  {}", if *v { "pass" } else { "FAIL" });
        }
        for (k, v) in &self.advisory {
            let _ = writeln!(out, "  {k:<width$}  {} (advisory)", if *v { "pass" } else { "miss" });
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}
