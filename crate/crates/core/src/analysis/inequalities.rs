//! Newton's inequality for elementary symmetric functions, the harmonic sum
//! bound it iterates to, and the Wirtinger inequalities for periodic
//! functions.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::Report;
use crate::error::{invalid, Result};
use crate::geometry::{CurveMetrics, OscTerms, MIN_VERTICES};

/// Relative rounding allowance for exact inequalities.
pub const ROUNDING_GUARD: f64 = 1e-12;

/// Two sides of an inequality `lhs >= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs >= rhs (1 - ROUNDING_GUARD)`.
    pub holds: bool,
}

impl InequalityVerdict {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs >= rhs - ROUNDING_GUARD * rhs.abs(),
        }
    }

    /// `lhs / rhs - 1`.
    pub fn relative_gap(&self) -> f64 {
        self.lhs / self.rhs - 1.0
    }
}

fn positive_entries(l: &[f64]) -> Result<()> {
    if l.is_empty() {
        return invalid("empty list");
    }
    if let Some(i) = l.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return invalid(format!("entry {i} is not a positive number: {}", l[i]));
    }
    Ok(())
}

/// `Pi_0, ..., Pi_n` of `l`, the coefficients of `prod_j (x + l_j)` read from
/// the highest power down.
pub fn elementary_symmetric(l: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; l.len() + 1];
    e[0] = 1.0;
    for (j, &x) in l.iter().enumerate() {
        for i in (1..=j + 1).rev() {
            e[i] += x * e[i - 1];
        }
    }
    e
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Newton's inequality
/// `Pi_{i+1} / Pi_{i+2} >= (Pi_i / Pi_{i+1}) C(n,i+1)^2 / (C(n,i) C(n,i+2))`
/// for `0 <= i <= n - 2`.
pub fn newton_ratio_check(l: &[f64], i: usize) -> Result<InequalityVerdict> {
    positive_entries(l)?;
    let n = l.len();
    if n < 2 || i > n - 2 {
        return invalid(format!("index {i} out of range for {n} entries"));
    }
    let p = elementary_symmetric(l);
    let c = binomial(n, i + 1).powi(2) / (binomial(n, i) * binomial(n, i + 2));
    Ok(InequalityVerdict::new(p[i + 1] / p[i + 2], p[i] / p[i + 1] * c))
}

/// `sum 1/l_i >= m^2 / sum l_i` with `m` the number of entries.
pub fn harmonic_sum_bound_check(l: &[f64]) -> Result<InequalityVerdict> {
    positive_entries(l)?;
    let m = l.len() as f64;
    let lhs = l.iter().map(|x| 1.0 / x).sum();
    Ok(InequalityVerdict::new(lhs, m * m / l.iter().sum::<f64>()))
}

/// Integrals of a zero-mean periodic function and its derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WirtingerReport {
    pub period: f64,
    /// `integral f^2`.
    pub f2: f64,
    /// `integral f_x^2`.
    pub fx2: f64,
    /// `max f^2` over the samples.
    pub sup_f2: f64,
    /// `(P^2 / 4 pi^2) integral f_x^2`.
    pub l2_bound: f64,
    /// `(P / 2 pi) integral f_x^2`.
    pub sup_bound: f64,
    pub l2_holds: bool,
    pub sup_holds: bool,
    /// `1 - f2 / l2_bound`; zero exactly for a first harmonic.
    pub equality_gap: f64,
    /// Share of `integral f^2` carried by the first harmonic.
    pub first_harmonic_share: f64,
}

impl WirtingerReport {
    pub fn to_report(&self) -> Report {
        Report::new("wirtinger")
            .value("f2", self.f2)
            .value("fx2", self.fx2)
            .value("sup_f2", self.sup_f2)
            .value("l2_bound", self.l2_bound)
            .value("sup_bound", self.sup_bound)
            .value("equality_gap", self.equality_gap)
            .value("first_harmonic_share", self.first_harmonic_share)
            .verdict("l2_holds", self.l2_holds)
            .verdict("sup_holds", self.sup_holds)
    }
}

/// Evaluates both Wirtinger inequalities for equally spaced samples of a
/// periodic function over one period `P`.
///
/// The mean is subtracted first. Integrals use the periodic trapezoidal rule
/// and the derivative is spectral, so both are exact for trigonometric
/// polynomials resolved by the samples. The Nyquist mode of an even sample
/// count has no well-defined derivative and is dropped from both integrals.
pub fn wirtinger_check(samples: &[f64], period: f64) -> Result<WirtingerReport> {
    let n = samples.len();
    if n < MIN_VERTICES {
        return invalid(format!("need at least {MIN_VERTICES} samples, got {n}"));
    }
    if !(period.is_finite() && period > 0.0) {
        return invalid(format!("period must be positive, got {period}"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return invalid("samples must be finite");
    }
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let nf = n as f64;
    let mut f2 = 0.0;
    let mut fx2 = 0.0;
    let mut first = 0.0;
    for (j, c) in buf.iter().enumerate().skip(1) {
        if 2 * j == n {
            continue;
        }
        let freq = if 2 * j < n { j as f64 } else { j as f64 - nf };
        let power = c.norm_sqr() * period / (nf * nf);
        f2 += power;
        fx2 += power * (2.0 * PI * freq / period).powi(2);
        if freq.abs() == 1.0 {
            first += power;
        }
    }
    let mean = samples.iter().sum::<f64>() / nf;
    let sup_f2 = samples.iter().map(|x| (x - mean).powi(2)).fold(0.0, f64::max);
    let l2_bound = period * period / (4.0 * PI * PI) * fx2;
    let sup_bound = period / (2.0 * PI) * fx2;
    let guard = |bound: f64| bound + ROUNDING_GUARD * bound.abs() + f64::MIN_POSITIVE;
    Ok(WirtingerReport {
        period,
        f2,
        fx2,
        sup_f2,
        l2_bound,
        sup_bound,
        l2_holds: f2 <= guard(l2_bound),
        sup_holds: sup_f2 <= guard(sup_bound),
        equality_gap: if l2_bound > 0.0 { 1.0 - f2 / l2_bound } else { 0.0 },
        first_harmonic_share: if f2 > 0.0 { first / f2 } else { 0.0 },
    })
}

/// Relative slack for the Wirtinger inequalities applied to the discrete
/// curvature of a sampled curve.
pub const CURVE_WIRTINGER_SLACK: f64 = 0.01;

/// Wirtinger inequalities for `f = k - kbar` on a sampled curve:
/// `K_osc <= (L^3 / 4 pi^2) |k_s|^2` and `max |k - kbar|^2 <= (L / 2 pi) |k_s|^2`,
/// each up to [`CURVE_WIRTINGER_SLACK`].
pub fn curve_wirtinger_check(m: &CurveMetrics, osc: &OscTerms) -> [InequalityVerdict; 2] {
    let l = m.length;
    let ks2 = m.ks_norm_sq;
    let verdict = |small: f64, bound: f64| InequalityVerdict {
        lhs: bound,
        rhs: small,
        holds: small <= bound * (1.0 + CURVE_WIRTINGER_SLACK) + f64::MIN_POSITIVE,
    };
    [
        verdict(m.osc_energy, l.powi(3) / (4.0 * PI * PI) * ks2),
        verdict(osc.sup_dev_sq, l / (2.0 * PI) * ks2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled(n: usize, p: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(p * i as f64 / n as f64)).collect()
    }

    #[test]
    fn symmetric_functions_by_expansion() {
        // (x + 1)(x + 2)(x + 3) = x^3 + 6x^2 + 11x + 6
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]), vec![1.0, 6.0, 11.0, 6.0]);
        assert_eq!(binomial(4, 2), 6.0);
    }

    #[test]
    fn newton_equal_entries_is_equality() {
        for i in 0..=2 {
            let v = newton_ratio_check(&[1.0; 4], i).unwrap();
            assert!(v.holds && v.relative_gap().abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn newton_small_case() {
        // Pi = (1, 6, 11, 6): lhs = 6/11, rhs = (1/6) * 9/3 = 1/2.
        let v = newton_ratio_check(&[1.0, 2.0, 3.0], 0).unwrap();
        assert!((v.lhs - 6.0 / 11.0).abs() < 1e-15);
        assert!((v.rhs - 0.5).abs() < 1e-15);
        assert!(v.holds && v.relative_gap() > 0.0);
        // i = 1: lhs = 11/6, rhs = (6/11) * 9/3 = 18/11.
        let v = newton_ratio_check(&[1.0, 2.0, 3.0], 1).unwrap();
        assert!((v.lhs - 11.0 / 6.0).abs() < 1e-15 && (v.rhs - 18.0 / 11.0).abs() < 1e-15);
        assert!(newton_ratio_check(&[1.0, 2.0, 3.0], 2).is_err());
        assert!(newton_ratio_check(&[1.0, -2.0, 3.0], 0).is_err());
    }

    #[test]
    fn harmonic_examples() {
        let v = harmonic_sum_bound_check(&[1.0, 1.0]).unwrap();
        assert_eq!((v.lhs, v.rhs), (2.0, 2.0));
        assert!(v.holds);
        let v = harmonic_sum_bound_check(&[1.0, 3.0]).unwrap();
        assert!((v.lhs - 4.0 / 3.0).abs() < 1e-15 && v.rhs == 1.0 && v.holds);
        assert!(harmonic_sum_bound_check(&[]).is_err());
    }

    #[test]
    fn first_harmonic_is_equality() {
        let p = 3.7;
        let s = sampled(64, p, |x| 2.5 * (2.0 * PI * x / p + 0.3).sin() + 1.0);
        let r = wirtinger_check(&s, p).unwrap();
        assert!(r.equality_gap.abs() < 1e-12, "{r:?}");
        assert!((r.first_harmonic_share - 1.0).abs() < 1e-12);
        assert!((r.f2 - 2.5 * 2.5 * p / 2.0).abs() < 1e-12);
        assert!(r.l2_holds && r.sup_holds);
    }

    #[test]
    fn second_harmonic_ratio_is_quarter() {
        let p = 1.0;
        let s = sampled(32, p, |x| (4.0 * PI * x / p).sin());
        let r = wirtinger_check(&s, p).unwrap();
        assert!((r.f2 / r.l2_bound - 0.25).abs() < 1e-12);
        assert!(r.first_harmonic_share.abs() < 1e-12);
    }

    #[test]
    fn wirtinger_rejections() {
        assert!(wirtinger_check(&[0.0; 8], 1.0).is_err());
        assert!(wirtinger_check(&[0.0; 16], 0.0).is_err());
        let r = wirtinger_check(&[1.0; 16], 1.0).unwrap();
        assert!(r.l2_holds && r.sup_holds && r.f2 == 0.0);
    }
}
