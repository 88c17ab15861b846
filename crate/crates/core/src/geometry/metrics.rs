//! Scalar curve quantities.
//!
//! Length and area are corrected per segment by the circular arc through the
//! segment endpoints with the mean of the two vertex curvatures, which makes
//! them exact on circles and fourth-order accurate on smooth curves. Integrals
//! use dual-cell weights rescaled to the corrected length.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{Frame, SampledCurve};
use crate::error::{Error, Result};

/// Largest allowed distance of the turning sum from an integer multiple of 2 pi.
const WINDING_TOLERANCE: f64 = 0.1;

/// Scalar report for one curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMetrics {
    pub length: f64,
    pub signed_area: f64,
    /// `L^2 / (4 pi A)`, absent when the area vanishes.
    pub isoperimetric_ratio: Option<f64>,
    pub winding_number: i64,
    /// `2 omega pi / L`.
    pub average_curvature: f64,
    /// `L * integral (k - kbar)^2 ds`.
    pub osc_energy: f64,
    pub ks_norm_sq: f64,
    pub kss_norm_sq: f64,
    pub min_curvature: f64,
}

/// Integrals appearing in the evolution of the oscillation energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OscTerms {
    /// Quadrature mean of the curvature, used as `kbar` inside these terms.
    pub kbar: f64,
    /// `integral (k - kbar)^2 k_s^2 ds`.
    pub quad: f64,
    /// `integral (k - kbar) k_s^2 ds`.
    pub lin: f64,
    /// `integral k^2 ds`.
    pub k2: f64,
    /// `max |k - kbar|^2`.
    pub sup_dev_sq: f64,
}

fn arc_segment(kappa: f64, h: f64) -> (f64, f64) {
    let a = (0.5 * kappa * h).clamp(-1.0, 1.0);
    let theta = 2.0 * a.asin();
    if theta.abs() < 1e-3 {
        // Series in theta avoid the cancellation in theta - sin(theta).
        let t2 = theta * theta;
        let arc = h * (1.0 + t2 / 24.0 + 7.0 * t2 * t2 / 5760.0);
        let cap = h * h * theta / 12.0 * (1.0 + t2 / 30.0);
        (arc, cap)
    } else {
        (theta / kappa, (theta - theta.sin()) / (2.0 * kappa * kappa))
    }
}

/// Measures a polygon of any vertex distribution.
pub(crate) fn measure(curve: &SampledCurve) -> Result<(CurveMetrics, OscTerms, Frame)> {
    let frame = Frame::new(curve.vertices());
    let n = frame.len();
    let k = &frame.k;

    let mut length = 0.0;
    let mut caps = 0.0;
    for i in 0..n {
        let kappa = 0.5 * (k[i] + k[(i + 1) % n]);
        let (arc, cap) = arc_segment(kappa, frame.h[i]);
        length += arc;
        caps += cap;
    }
    let signed_area = curve.polygon_area() + caps;

    let turning: f64 = frame.phi.iter().sum::<f64>() / (2.0 * PI);
    let winding = turning.round();
    if (turning - winding).abs() > WINDING_TOLERANCE {
        return Err(Error::WindingNotInteger(turning));
    }

    let stretch = length / frame.h.iter().sum::<f64>();
    let w: Vec<f64> = frame.d.iter().map(|d| d * stretch).collect();
    let kbar_q = k.iter().zip(&w).map(|(k, w)| k * w).sum::<f64>() / length;
    let osc_energy = length
        * k.iter()
            .zip(&w)
            .map(|(k, w)| (k - kbar_q).powi(2) * w)
            .sum::<f64>();
    let ks_norm_sq = (0..n)
        .map(|i| (k[(i + 1) % n] - k[i]).powi(2) / frame.h[i])
        .sum::<f64>()
        * stretch;
    let kss = frame.second_difference(k, &frame.d);
    let kss_norm_sq = kss.iter().zip(&w).map(|(v, w)| v * v * w).sum();
    let ks_v = frame.central_difference(k);
    let mut terms = OscTerms {
        kbar: kbar_q,
        ..OscTerms::default()
    };
    for i in 0..n {
        let dev = k[i] - kbar_q;
        let s2 = ks_v[i] * ks_v[i] * w[i];
        terms.quad += dev * dev * s2;
        terms.lin += dev * s2;
        terms.k2 += k[i] * k[i] * w[i];
        terms.sup_dev_sq = terms.sup_dev_sq.max(dev * dev);
    }

    let isoperimetric_ratio = if signed_area.abs() > 1e-9 * length * length {
        Some(length * length / (4.0 * PI * signed_area))
    } else {
        None
    };
    let metrics = CurveMetrics {
        length,
        signed_area,
        isoperimetric_ratio,
        winding_number: winding as i64,
        average_curvature: 2.0 * PI * winding / length,
        osc_energy,
        ks_norm_sq,
        kss_norm_sq,
        min_curvature: k.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Ok((metrics, terms, frame))
}

/// Metrics of a curve that is uniform in arc length.
pub fn metrics(curve: &SampledCurve) -> Result<CurveMetrics> {
    metrics_with_terms(curve).map(|(m, _)| m)
}

/// Metrics together with the oscillation-energy integrals.
pub fn metrics_with_terms(curve: &SampledCurve) -> Result<(CurveMetrics, OscTerms)> {
    if !curve.is_uniform() {
        return Err(Error::NotUniform(format!(
            "chord spread {:.3e}",
            curve.chord_spread()
        )));
    }
    measure(curve).map(|(m, t, _)| (m, t))
}
