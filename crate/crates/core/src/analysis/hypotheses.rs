//! Admissibility of initial data, the multiplicity bound and the
//! embeddedness certificate.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::constants::{isoperimetric_threshold, kstar, EMBEDDED_THRESHOLD};
use super::Report;
use crate::error::{invalid, Result};
use crate::geometry::{metrics, CurveMetrics, SampledCurve};

/// Whether a curve satisfies the smallness hypotheses of the global
/// convergence result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub kosc0: f64,
    pub iso0: Option<f64>,
    pub kstar: f64,
    pub iso_threshold: f64,
    pub winding_number: i64,
    pub area0: f64,
    /// `K_osc < K*`.
    pub kosc_ok: bool,
    /// `I < exp(K* / 8 pi^2)`.
    pub iso_ok: bool,
    /// `omega = 1`.
    pub winding_ok: bool,
    /// `A > 0`.
    pub area_ok: bool,
    pub admissible: bool,
}

impl HypothesisReport {
    pub fn from_metrics(m: &CurveMetrics) -> Self {
        let ks = kstar();
        let iso_threshold = isoperimetric_threshold();
        let kosc_ok = m.osc_energy < ks;
        let iso_ok = m.isoperimetric_ratio.is_some_and(|i| i < iso_threshold);
        let winding_ok = m.winding_number == 1;
        let area_ok = m.signed_area > 0.0;
        Self {
            kosc0: m.osc_energy,
            iso0: m.isoperimetric_ratio,
            kstar: ks,
            iso_threshold,
            winding_number: m.winding_number,
            area0: m.signed_area,
            kosc_ok,
            iso_ok,
            winding_ok,
            area_ok,
            admissible: kosc_ok && iso_ok && winding_ok && area_ok,
        }
    }

    pub fn to_report(&self) -> Report {
        Report::new("hypotheses")
            .value("kosc0", self.kosc0)
            .value("iso0", self.iso0.unwrap_or(f64::NAN))
            .value("kstar", self.kstar)
            .value("iso_threshold", self.iso_threshold)
            .value("omega", self.winding_number as f64)
            .value("area0", self.area0)
            .verdict("kosc_ok", self.kosc_ok)
            .verdict("iso_ok", self.iso_ok)
            .verdict("winding_ok", self.winding_ok)
            .verdict("area_ok", self.area_ok)
            .verdict("admissible", self.admissible)
    }
}

/// Checks the hypotheses on a curve that is uniform in arc length.
pub fn check_hypotheses(curve: &SampledCurve) -> Result<HypothesisReport> {
    Ok(HypothesisReport::from_metrics(&metrics(curve)?))
}

/// Lower bound `16 m^2 - 4 omega^2 pi^2` on the oscillation energy of a curve
/// with a point of multiplicity `m`.
pub fn multiplicity_bound(m: u32, omega: i64) -> Result<f64> {
    if m < 1 {
        return invalid("multiplicity must be at least 1");
    }
    let (m, w) = (m as f64, omega as f64);
    Ok(16.0 * m * m - 4.0 * w * w * PI * PI)
}

/// Comparison of a measured oscillation energy with the multiplicity bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityCheck {
    pub multiplicity: u32,
    pub winding_number: i64,
    pub kosc: f64,
    pub bound: f64,
    /// `kosc - bound`.
    pub margin: f64,
    pub holds: bool,
}

impl MultiplicityCheck {
    pub fn to_report(&self) -> Report {
        Report::new("multiplicity")
            .value("m", self.multiplicity as f64)
            .value("omega", self.winding_number as f64)
            .value("kosc", self.kosc)
            .value("bound", self.bound)
            .value("margin", self.margin)
            .verdict("kosc_ge_bound", self.holds)
    }
}

/// Checks `K_osc >= 16 m^2 - 4 omega^2 pi^2` for a measured multiplicity.
pub fn multiplicity_check(m: &CurveMetrics, multiplicity: u32) -> Result<MultiplicityCheck> {
    let bound = multiplicity_bound(multiplicity, m.winding_number)?;
    Ok(MultiplicityCheck {
        multiplicity,
        winding_number: m.winding_number,
        kosc: m.osc_energy,
        bound,
        margin: m.osc_energy - bound,
        holds: m.osc_energy >= bound,
    })
}

/// Outcome of the energy-based embeddedness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "kebab-case")]
pub enum Certificate {
    /// `omega = +-1` and `K_osc < 64 - 4 pi^2`, so no point has two preimages.
    CertifiedEmbedded,
    /// The energy test does not apply or does not decide; a geometric check
    /// is authoritative.
    Inconclusive(String),
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::CertifiedEmbedded)
    }
}

pub fn certificate_from_metrics(m: &CurveMetrics) -> Certificate {
    if m.winding_number.abs() != 1 {
        Certificate::Inconclusive(format!("winding number {} is not +-1", m.winding_number))
    } else if m.osc_energy >= EMBEDDED_THRESHOLD {
        Certificate::Inconclusive(format!(
            "oscillation energy {:.6} is not below {EMBEDDED_THRESHOLD:.6}",
            m.osc_energy
        ))
    } else {
        Certificate::CertifiedEmbedded
    }
}

/// Energy certificate for a curve that is uniform in arc length.
pub fn embeddedness_certificate(curve: &SampledCurve) -> Result<Certificate> {
    Ok(certificate_from_metrics(&metrics(curve)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, resample_uniform, ShapeSpec};

    #[test]
    fn circle_is_admissible_and_certified() {
        let c = generate(&ShapeSpec::circle(1.0), 256).unwrap();
        let h = check_hypotheses(&c).unwrap();
        assert!(h.admissible, "{h:?}");
        assert!(embeddedness_certificate(&c).unwrap().is_certified());
        assert!(h.to_report().passed());
    }

    #[test]
    fn lemniscate_is_not_admissible() {
        let c = resample_uniform(&generate(&ShapeSpec::Lemniscate { scale: 1.0 }, 512).unwrap(), 512)
            .unwrap();
        let h = check_hypotheses(&c).unwrap();
        assert!(!h.winding_ok && !h.area_ok && !h.admissible);
        assert!(h.iso0.is_none());
    }

    #[test]
    fn third_mode_perturbation_is_not_admissible() {
        // Quadrature of the exact radial graph gives K_osc = 3.1569 for
        // r = 1 + 0.05 cos 3t, far above K*.
        let c = resample_uniform(&generate(&ShapeSpec::fourier(1.0, &[(3, 0.05)]), 256).unwrap(), 256)
            .unwrap();
        let h = check_hypotheses(&c).unwrap();
        assert!((h.kosc0 - 3.156_937_146_279_578).abs() < 1e-2 * 3.157);
        assert!(!h.kosc_ok && !h.admissible);
    }

    #[test]
    fn multiplicity_bound_values() {
        assert_eq!(multiplicity_bound(2, 0).unwrap(), 64.0);
        assert!((multiplicity_bound(1, 1).unwrap() + 23.478_417_604_357_434).abs() < 1e-12);
        assert!((multiplicity_bound(2, 1).unwrap() - 24.521_582_395_642_566).abs() < 1e-12);
        assert_eq!(multiplicity_bound(2, 1).unwrap(), EMBEDDED_THRESHOLD);
        assert!(multiplicity_bound(0, 1).is_err());
    }

    #[test]
    fn limacon_certificate_is_out_of_scope() {
        let spec = ShapeSpec::Limacon { a: 0.5, b: 1.0 };
        let c = resample_uniform(&generate(&spec, 512).unwrap(), 512).unwrap();
        match embeddedness_certificate(&c).unwrap() {
            Certificate::Inconclusive(reason) => assert!(reason.contains("winding number 2")),
            other => panic!("{other:?}"),
        }
    }
}
