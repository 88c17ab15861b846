//! Bounds and fits over recorded trajectories.
//!
//! Time integrals use the trapezoidal rule over the record times.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::constants::kstar;
use super::hypotheses::HypothesisReport;
use super::Report;
use crate::error::{invalid, Result};
use crate::flow::TrajectoryRecord;

/// Per-record slack, relative to `max(1, |Q|)`, allowed in the monotonicity of
/// `Q = K_osc + 8 omega^2 pi^2 log L`. Refinement runs show increases at the
/// level of rounding (below `1e-14` relative), so this only absorbs rounding.
pub const SMALLNESS_SLACK: f64 = 1e-10;

/// Decay fits reject windows whose values never exceed this level, which is
/// the rounding floor of the discrete energies.
pub const DECAY_FLOOR: f64 = 1e-20;

fn trapezoid(records: &[TrajectoryRecord], f: impl Fn(&TrajectoryRecord) -> f64) -> f64 {
    records
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (f(&w[0]) + f(&w[1])))
        .sum()
}

fn nonempty(records: &[TrajectoryRecord]) -> Result<()> {
    if records.is_empty() {
        return invalid("trajectory is empty");
    }
    Ok(())
}

/// `(L0 / 2 pi)^4 - (A0 / pi)^2`, the bound on the total time during which
/// the curvature fails to be positive. Negative only when `(L0, A0)` violate
/// the isoperimetric inequality.
pub fn waiting_time_bound(l0: f64, a0: f64) -> Result<f64> {
    if !(l0.is_finite() && l0 > 0.0 && a0.is_finite()) {
        return invalid(format!("need finite L0 > 0 and finite A0, got L0={l0}, A0={a0}"));
    }
    Ok((l0 / (2.0 * PI)).powi(4) - (a0 / PI).powi(2))
}

/// Measure of the set of times with `min k <= 0`, by the trapezoidal rule on
/// the indicator.
pub fn positivity_waiting_measure(records: &[TrajectoryRecord]) -> Result<f64> {
    nonempty(records)?;
    Ok(trapezoid(records, |r| {
        if r.metrics.min_curvature <= 0.0 {
            1.0
        } else {
            0.0
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaitingTimeReport {
    pub measure: f64,
    pub bound: f64,
    /// The bound is negative, so the initial data violate the isoperimetric
    /// inequality.
    pub inconsistent_input: bool,
    pub holds: bool,
}

impl WaitingTimeReport {
    pub fn to_report(&self) -> Report {
        Report::new("waiting-time")
            .value("measure", self.measure)
            .value("bound", self.bound)
            .verdict("isoperimetric_consistent", !self.inconsistent_input)
            .verdict("measure_le_bound", self.holds)
    }
}

/// Compares the waiting measure with the bound from the initial record.
///
/// The comparison allows rounding of the bound, `64 eps (L0 / 2 pi)^4`, since
/// it vanishes exactly on a circle.
pub fn waiting_time_check(records: &[TrajectoryRecord]) -> Result<WaitingTimeReport> {
    let measure = positivity_waiting_measure(records)?;
    let m0 = &records[0].metrics;
    let bound = waiting_time_bound(m0.length, m0.signed_area)?;
    let guard = 64.0 * f64::EPSILON * (m0.length / (2.0 * PI)).powi(4);
    Ok(WaitingTimeReport {
        measure,
        bound,
        inconsistent_input: bound < -guard,
        holds: measure <= bound + guard,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1EnergyReport {
    /// Trapezoidal `integral K_osc dt` over the recorded span.
    pub integral: f64,
    /// `L(0)^4 / 16 pi^2`.
    pub bound: f64,
    pub span: f64,
    /// Strict inequality `integral < bound`.
    pub holds: bool,
}

impl L1EnergyReport {
    pub fn to_report(&self) -> Report {
        Report::new("l1-energy")
            .value("integral", self.integral)
            .value("bound", self.bound)
            .value("span", self.span)
            .verdict("integral_lt_bound", self.holds)
    }
}

pub fn l1_energy_check(records: &[TrajectoryRecord]) -> Result<L1EnergyReport> {
    nonempty(records)?;
    let integral = trapezoid(records, |r| r.metrics.osc_energy);
    let l0 = records[0].metrics.length;
    let bound = l0.powi(4) / (16.0 * PI * PI);
    Ok(L1EnergyReport {
        integral,
        bound,
        span: records[records.len() - 1].t - records[0].t,
        holds: integral < bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessReport {
    /// `2 K*`.
    pub threshold: f64,
    pub max_kosc: f64,
    /// First record with `K_osc > 2 K*`.
    pub first_excess: Option<usize>,
    /// Largest increase of `K_osc + 8 omega^2 pi^2 log L` between records.
    pub max_increase: f64,
    /// First record where that increase exceeds the slack.
    pub first_increase: Option<usize>,
    pub holds: bool,
}

impl SmallnessReport {
    pub fn to_report(&self) -> Report {
        Report::new("smallness")
            .value("threshold", self.threshold)
            .value("max_kosc", self.max_kosc)
            .value("max_increase", self.max_increase)
            .value("first_excess", self.first_excess.map_or(f64::NAN, |i| i as f64))
            .value("first_increase", self.first_increase.map_or(f64::NAN, |i| i as f64))
            .verdict("kosc_le_2kstar", self.first_excess.is_none())
            .verdict("monotone_quantity_nonincreasing", self.first_increase.is_none())
    }
}

/// Checks `K_osc <= 2 K*` at every record and that
/// `K_osc + 8 omega^2 pi^2 log L` does not increase beyond `slack` relative.
/// The initial record must satisfy the smallness hypotheses.
pub fn smallness_propagation_check(records: &[TrajectoryRecord], slack: f64) -> Result<SmallnessReport> {
    nonempty(records)?;
    let h = HypothesisReport::from_metrics(&records[0].metrics);
    if !h.admissible {
        return invalid(format!(
            "initial data are not admissible: K_osc={:.6e}, I={:?}, omega={}, A={:.6e}",
            h.kosc0, h.iso0, h.winding_number, h.area0
        ));
    }
    let threshold = 2.0 * kstar();
    let w2 = (h.winding_number as f64).powi(2);
    let q = |r: &TrajectoryRecord| r.metrics.osc_energy + 8.0 * w2 * PI * PI * r.metrics.length.ln();
    let first_excess = records.iter().position(|r| r.metrics.osc_energy > threshold);
    let max_kosc = records.iter().map(|r| r.metrics.osc_energy).fold(0.0, f64::max);
    let mut max_increase = f64::NEG_INFINITY;
    let mut first_increase = None;
    for (j, w) in records.windows(2).enumerate() {
        let (a, b) = (q(&w[0]), q(&w[1]));
        max_increase = max_increase.max(b - a);
        if first_increase.is_none() && b - a > slack * a.abs().max(1.0) {
            first_increase = Some(j + 1);
        }
    }
    Ok(SmallnessReport {
        threshold,
        max_kosc,
        first_excess,
        max_increase,
        first_increase,
        holds: first_excess.is_none() && first_increase.is_none(),
    })
}

/// Quantity fitted by [`decay_fit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayQuantity {
    Kosc,
    Ks2,
    Kss2,
}

impl DecayQuantity {
    fn of(self, r: &TrajectoryRecord) -> f64 {
        match self {
            DecayQuantity::Kosc => r.metrics.osc_energy,
            DecayQuantity::Ks2 => r.metrics.ks_norm_sq,
            DecayQuantity::Kss2 => r.metrics.kss_norm_sq,
        }
    }
}

/// Least-squares fit of `amplitude * exp(-rate * t)` over a time window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub quantity: DecayQuantity,
    pub window: (f64, f64),
    pub rate: f64,
    pub amplitude: f64,
    /// Root mean square of the residuals of `log quantity`.
    pub rms_log_residual: f64,
    pub samples: usize,
}

impl DecayFit {
    /// Fit report; the comparison of the rate with `floor` is advisory.
    pub fn to_report(&self, floor: Option<f64>) -> Report {
        let mut r = Report::new("decay-fit")
            .value("t0", self.window.0)
            .value("t1", self.window.1)
            .value("rate", self.rate)
            .value("amplitude", self.amplitude)
            .value("rms_log_residual", self.rms_log_residual)
            .verdict("rate_positive", self.rate > 0.0);
        if let Some(f) = floor {
            r = r.value("rate_floor", f).advise("rate_ge_0.9_floor", self.rate >= 0.9 * f);
        }
        r
    }
}

/// `4 pi^4 / L(0)^4`, the asymptotic decay rate of `|k_ss|^2` after a time
/// translation.
pub fn kss_rate_floor(l0: f64) -> f64 {
    4.0 * PI.powi(4) / l0.powi(4)
}

pub fn decay_fit(records: &[TrajectoryRecord], quantity: DecayQuantity, window: (f64, f64)) -> Result<DecayFit> {
    let (t0, t1) = window;
    if !(t1 > t0) {
        return invalid(format!("window [{t0}, {t1}] is empty"));
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t >= t0 && r.t <= t1)
        .map(|r| (r.t, quantity.of(r)))
        .collect();
    if pts.len() < 3 {
        return invalid(format!("window [{t0}, {t1}] holds {} records", pts.len()));
    }
    let dt = (pts[pts.len() - 1].0 - pts[0].0) / (pts.len() - 1) as f64;
    if t1 - t0 <= 10.0 * dt {
        return invalid(format!("window length {} is not above 10 dt = {}", t1 - t0, 10.0 * dt));
    }
    if let Some(&(t, v)) = pts.iter().find(|p| !(p.1 > 0.0)) {
        return invalid(format!("{quantity:?} is not positive at t={t}: {v}"));
    }
    if pts.iter().all(|p| p.1 <= DECAY_FLOOR) {
        return invalid(format!("{quantity:?} stays below {DECAY_FLOOR:e} on the window"));
    }
    let n = pts.len() as f64;
    let (mt, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1.ln() / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), p| {
        let dx = p.0 - mt;
        (sxy + dx * (p.1.ln() - my), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    let intercept = my - slope * mt;
    let rms = (pts
        .iter()
        .map(|p| (p.1.ln() - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit {
        quantity,
        window,
        rate: -slope,
        amplitude: intercept.exp(),
        rms_log_residual: rms,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{run, FlowConfig};
    use crate::geometry::{generate, ShapeSpec};

    fn synthetic(ts: &[f64], f: impl Fn(f64) -> f64, l: f64) -> Vec<TrajectoryRecord> {
        let c = generate(&ShapeSpec::circle(1.0), 64).unwrap();
        let cfg = FlowConfig {
            n: 64,
            dt: 1e-3,
            ..FlowConfig::default()
        }
        .with_max_time(1e-3);
        let base = run(&c, &cfg).unwrap().records[0];
        ts.iter()
            .map(|&t| {
                let mut r = base;
                r.t = t;
                r.metrics.osc_energy = f(t);
                r.metrics.kss_norm_sq = f(t);
                r.metrics.length = l;
                r
            })
            .collect()
    }

    #[test]
    fn waiting_bound_values() {
        assert!(waiting_time_bound(2.0 * PI, PI).unwrap().abs() < 1e-15);
        let b = waiting_time_bound(2.0 * PI * 1.01, PI).unwrap();
        assert!((b - (1.01f64.powi(4) - 1.0)).abs() < 1e-14);
        assert!((b - 0.040_604_01).abs() < 1e-12);
        assert_eq!(waiting_time_bound(2.0 * PI, 0.0).unwrap(), 1.0);
        assert!(waiting_time_bound(0.0, 1.0).is_err());
    }

    #[test]
    fn trapezoid_integrals() {
        let ts: Vec<f64> = (0..=100).map(|j| j as f64 * 0.01).collect();
        let recs = synthetic(&ts, |t| 2.0 * t, 2.0 * PI);
        let l1 = l1_energy_check(&recs).unwrap();
        assert!((l1.integral - 1.0).abs() < 1e-12);
        assert!((l1.bound - PI * PI).abs() < 1e-12);
        assert!(l1.holds);
        let mut recs = recs;
        for r in recs.iter_mut().take(11) {
            r.metrics.min_curvature = -1.0;
        }
        // Indicator is 1 on records 0..=10: 10 full intervals plus half of one.
        let w = positivity_waiting_measure(&recs).unwrap();
        assert!((w - 0.105).abs() < 1e-12);
    }

    #[test]
    fn decay_fit_recovers_rate() {
        let ts: Vec<f64> = (0..=400).map(|j| j as f64 * 0.01).collect();
        let recs = synthetic(&ts, |t| 3.0 * (-2.5 * t).exp(), 2.0 * PI);
        let fit = decay_fit(&recs, DecayQuantity::Kosc, (1.0, 3.0)).unwrap();
        assert!((fit.rate - 2.5).abs() < 1e-10);
        assert!((fit.amplitude - 3.0).abs() < 1e-9);
        assert!(fit.rms_log_residual < 1e-10);
        assert_eq!(fit.samples, 201);
        let rep = fit.to_report(Some(kss_rate_floor(2.0 * PI)));
        assert!(rep.passed() && rep.advisory["rate_ge_0.9_floor"]);
    }

    #[test]
    fn decay_fit_rejections() {
        let ts: Vec<f64> = (0..=400).map(|j| j as f64 * 0.01).collect();
        let zero = synthetic(&ts, |_| 0.0, 2.0 * PI);
        assert!(decay_fit(&zero, DecayQuantity::Kosc, (1.0, 3.0)).is_err());
        let tiny = synthetic(&ts, |_| 1e-28, 2.0 * PI);
        assert!(decay_fit(&tiny, DecayQuantity::Kosc, (1.0, 3.0)).is_err());
        let ok = synthetic(&ts, |t| (-t).exp(), 2.0 * PI);
        assert!(decay_fit(&ok, DecayQuantity::Kosc, (1.0, 1.05)).is_err());
        assert!(decay_fit(&ok, DecayQuantity::Kosc, (2.0, 1.0)).is_err());
    }

    #[test]
    fn smallness_requires_admissible_start() {
        let ts: Vec<f64> = (0..=10).map(|j| j as f64 * 0.1).collect();
        let big = synthetic(&ts, |_| 1.0, 2.0 * PI);
        assert!(smallness_propagation_check(&big, SMALLNESS_SLACK).is_err());
        let ok = synthetic(&ts, |t| 0.01 * (-t).exp(), 2.0 * PI);
        let rep = smallness_propagation_check(&ok, SMALLNESS_SLACK).unwrap();
        assert!(rep.holds, "{rep:?}");
        let rising = synthetic(&ts, |t| 0.01 + 0.1 * t, 2.0 * PI);
        let rep = smallness_propagation_check(&rising, SMALLNESS_SLACK).unwrap();
        assert_eq!(rep.first_increase, Some(1));
        assert_eq!(rep.first_excess, Some(10));
    }
}
