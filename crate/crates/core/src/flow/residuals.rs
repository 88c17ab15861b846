//! Residuals of the evolution identities along a recorded trajectory.
//!
//! Time derivatives are centred differences over neighbouring records; the
//! length identity is additionally checked per step against the trapezoidal
//! mean of `|k_s|^2` over that step. A residual is normalized by the sum of
//! the magnitudes of the terms it balances. Records where the balanced
//! change over the stencil is below `floor * (1 + |X|)` cannot be resolved in
//! double precision and are counted as skipped.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::TrajectoryRecord;
use crate::error::{invalid, Result};

/// Default resolvability floor.
pub const RESOLUTION_FLOOR: f64 = 1e-12;

/// Normalized residuals of one identity.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualSeries {
    pub name: String,
    /// Largest normalized residual over resolved records.
    pub max: f64,
    pub mean: f64,
    /// Record index of `max`.
    pub worst: Option<usize>,
    /// Largest absolute residual over all records.
    pub max_abs: f64,
    pub resolved: usize,
    pub skipped: usize,
    /// `(record index, normalized residual)` for resolved records.
    pub values: Vec<(usize, f64)>,
}

impl ResidualSeries {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::default()
        }
    }

    fn push(&mut self, index: usize, residual: f64, scale: f64, change: f64, size: f64, floor: f64) {
        self.max_abs = self.max_abs.max(residual.abs());
        if change.abs() < floor * (1.0 + size.abs()) || scale <= 0.0 {
            self.skipped += 1;
            return;
        }
        let r = residual.abs() / scale;
        self.values.push((index, r));
        if r > self.max || self.worst.is_none() {
            self.max = r;
            self.worst = Some(index);
        }
    }

    fn finish(mut self) -> Self {
        self.resolved = self.values.len();
        if self.resolved > 0 {
            self.mean = self.values.iter().map(|v| v.1).sum::<f64>() / self.resolved as f64;
        }
        self
    }

    /// Number of resolved records with residual above `tol`.
    pub fn violations(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| v.1 > tol).count()
    }
}

/// Residuals of the area, length, average-curvature and oscillation-energy
/// identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `|dA/dt| / |A(0)|` at interior records (not normalized by terms).
    pub area_rate: ResidualSeries,
    /// `dL/dt + |k_s|^2`, centred.
    pub length: ResidualSeries,
    /// `Delta L / Delta t + mean |k_s|^2` over each step.
    pub length_per_step: ResidualSeries,
    /// `dkbar/dt - (2 omega pi / L^2) |k_s|^2`, centred.
    pub average_curvature: ResidualSeries,
    /// Oscillation-energy balance, centred.
    pub osc_energy: ResidualSeries,
}

impl ResidualReport {
    pub fn series(&self) -> [&ResidualSeries; 5] {
        [
            &self.area_rate,
            &self.length,
            &self.length_per_step,
            &self.average_curvature,
            &self.osc_energy,
        ]
    }
}

/// Terms of the oscillation-energy balance at one record, as
/// `(left side without dK/dt, right side)`.
pub fn osc_balance_terms(r: &TrajectoryRecord) -> (f64, f64) {
    let m = &r.metrics;
    let l = m.length;
    let kb = r.osc.kbar;
    let lhs = m.osc_energy * m.ks_norm_sq / l + 2.0 * l * m.kss_norm_sq;
    let rhs = 3.0 * l * r.osc.quad + 6.0 * kb * l * r.osc.lin + 2.0 * kb * kb * l * m.ks_norm_sq;
    (lhs, rhs)
}

/// Computes all identity residuals with the default resolvability floor.
pub fn identity_residuals(records: &[TrajectoryRecord]) -> Result<ResidualReport> {
    identity_residuals_with_floor(records, RESOLUTION_FLOOR)
}

pub fn identity_residuals_with_floor(records: &[TrajectoryRecord], floor: f64) -> Result<ResidualReport> {
    if records.len() < 3 {
        return invalid(format!(
            "identity residuals need at least 3 records, got {}",
            records.len()
        ));
    }
    let a0 = records[0].metrics.signed_area.abs();
    let mut area = ResidualSeries::new("area-rate");
    let mut length = ResidualSeries::new("length");
    let mut kbar = ResidualSeries::new("average-curvature");
    let mut osc = ResidualSeries::new("osc-energy");
    for j in 1..records.len() - 1 {
        let (p, r, q) = (&records[j - 1], &records[j], &records[j + 1]);
        let span = q.t - p.t;
        let d = |f: fn(&TrajectoryRecord) -> f64| (f(q) - f(p)) / span;
        let m = &r.metrics;

        let da = d(|x| x.metrics.signed_area);
        area.max_abs = area.max_abs.max(da.abs());
        if a0 > 0.0 {
            area.values.push((j, da.abs() / a0));
            if da.abs() / a0 >= area.max || area.worst.is_none() {
                area.max = da.abs() / a0;
                area.worst = Some(j);
            }
        }

        let dl = d(|x| x.metrics.length);
        length.push(j, dl + m.ks_norm_sq, dl.abs() + m.ks_norm_sq, m.ks_norm_sq * span, m.length, floor);

        let dk = d(|x| x.metrics.average_curvature);
        let pred = 2.0 * PI * m.winding_number as f64 / (m.length * m.length) * m.ks_norm_sq;
        kbar.push(j, dk - pred, dk.abs() + pred.abs(), pred * span, m.average_curvature, floor);

        let dkosc = d(|x| x.metrics.osc_energy);
        let (lhs, rhs) = osc_balance_terms(r);
        osc.push(
            j,
            dkosc + lhs - rhs,
            dkosc.abs() + lhs.abs() + rhs.abs(),
            (lhs.abs() + rhs.abs()) * span,
            m.osc_energy,
            floor,
        );
    }

    let mut per_step = ResidualSeries::new("length-per-step");
    for j in 0..records.len() - 1 {
        let (p, q) = (&records[j], &records[j + 1]);
        let span = q.t - p.t;
        let mean = 0.5 * (p.metrics.ks_norm_sq + q.metrics.ks_norm_sq);
        let dl = (q.metrics.length - p.metrics.length) / span;
        per_step.push(j, dl + mean, mean, mean * span, p.metrics.length, floor);
    }

    Ok(ResidualReport {
        area_rate: area.finish(),
        length: length.finish(),
        length_per_step: per_step.finish(),
        average_curvature: kbar.finish(),
        osc_energy: osc.finish(),
    })
}
