//! Verification suites: randomized inequality checks, the multiplicity
//! corpus, reference-run identity residuals and the density identity.
//!
//! Every suite is deterministic for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::analysis::{
    curve_wirtinger_check, density_integral, elementary_symmetric, harmonic_sum_bound_check,
    multiplicity_check, newton_ratio_check, wirtinger_check, Report,
};
use crate::error::{invalid, Result};
use crate::flow::{identity_residuals, run, FlowConfig, RunOutcome};
use crate::geometry::{generate, metrics_with_terms, resample_uniform, Mode, Point, SampledCurve, ShapeSpec};
use crate::intersections::{default_eps, find_crossings};

pub const SUITE_NAMES: [&str; 5] = [
    "wirtinger",
    "newton",
    "multiplicity-corpus",
    "flow-identities",
    "density",
];

/// Default case counts.
pub const INEQUALITY_CASES: usize = 1000;
pub const CORPUS_SIZE: usize = 500;

/// Vertex count of corpus curves.
pub const CORPUS_VERTICES: usize = 256;

/// Frozen tolerances of the flow-identities suite, from dt and n refinement
/// of the reference scenarios.
pub const AREA_DRIFT_TOL: f64 = 1e-4;
pub const MONOTONE_SLACK: f64 = 1e-10;
pub const LENGTH_IDENTITY_TOL: f64 = 0.02;
pub const CURVATURE_IDENTITY_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub violations: usize,
    pub reports: Vec<Report>,
    pub passed: bool,
}

impl SuiteOutcome {
    fn new(suite: &str, seed: u64, cases: usize, violations: usize, reports: Vec<Report>) -> Self {
        let passed = violations == 0 && reports.iter().all(Report::passed);
        Self {
            suite: suite.to_string(),
            seed,
            cases,
            violations,
            reports,
            passed,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "suite {} (seed {}): {} cases, {} violations, {}\n",
            self.suite,
            self.seed,
            self.cases,
            self.violations,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for r in &self.reports {
            out.push_str(&r.to_table());
        }
        out
    }
}

/// Runs a suite by name with default sizes.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteOutcome> {
    match name {
        "wirtinger" => Ok(wirtinger_suite(seed, INEQUALITY_CASES)),
        "newton" => Ok(newton_suite(seed, INEQUALITY_CASES)),
        "multiplicity-corpus" => multiplicity_corpus_suite(seed, CORPUS_SIZE),
        "flow-identities" => flow_identities_suite(),
        "density" => density_suite(),
        _ => invalid(format!(
            "unknown suite '{name}'; known suites: {}",
            SUITE_NAMES.join(", ")
        )),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random zero-mean trigonometric polynomials with modes up to 8, the first
/// harmonic equality case, and the curve form of both inequalities on corpus
/// curves.
pub fn wirtinger_suite(seed: u64, cases: usize) -> SuiteOutcome {
    let mut g = rng(seed);
    let mut violations = 0;
    let (mut max_l2, mut max_sup, mut max_oracle, mut max_eq) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cases {
        let n = g.gen_range(32..=256);
        let p = g.gen_range(0.1..10.0);
        let mut a = [0.0; 9];
        let mut b = [0.0; 9];
        for _ in 0..g.gen_range(1..=8) {
            let j = g.gen_range(1..=8);
            a[j] += g.gen_range(-1.0..1.0);
            b[j] += g.gen_range(-1.0..1.0);
        }
        let offset = g.gen_range(-2.0..2.0);
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / n as f64;
                offset
                    + (1..=8)
                        .map(|j| a[j] * (j as f64 * x).cos() + b[j] * (j as f64 * x).sin())
                        .sum::<f64>()
            })
            .collect();
        let r = wirtinger_check(&f, p).expect("valid samples");
        // Parseval on the generating coefficients.
        let exact_f2: f64 = (1..=8).map(|j| 0.5 * p * (a[j] * a[j] + b[j] * b[j])).sum();
        let exact_fx2: f64 = (1..=8)
            .map(|j| 0.5 * p * (2.0 * PI * j as f64 / p).powi(2) * (a[j] * a[j] + b[j] * b[j]))
            .sum();
        let oracle = ((r.f2 - exact_f2).abs() / exact_f2).max((r.fx2 - exact_fx2).abs() / exact_fx2);
        max_oracle = max_oracle.max(oracle);
        max_l2 = max_l2.max(r.f2 / r.l2_bound);
        max_sup = max_sup.max(r.sup_f2 / r.sup_bound);
        if !r.l2_holds || !r.sup_holds || oracle > 1e-9 {
            violations += 1;
        }

        let amp = g.gen_range(0.1..5.0);
        let phase = g.gen_range(0.0..2.0 * PI);
        let s: Vec<f64> = (0..n)
            .map(|i| amp * (2.0 * PI * i as f64 / n as f64 + phase).sin())
            .collect();
        let e = wirtinger_check(&s, p).expect("valid samples");
        max_eq = max_eq.max(e.equality_gap.abs());
        if e.equality_gap.abs() > 1e-6 {
            violations += 1;
        }
    }
    let functions = Report::new("periodic-functions")
        .value("cases", cases as f64)
        .value("max_l2_ratio", max_l2)
        .value("max_sup_ratio", max_sup)
        .value("max_parseval_error", max_oracle)
        .value("max_equality_gap", max_eq)
        .verdict("l2_and_sup_hold", max_l2 <= 1.0 + 1e-12 && max_sup <= 1.0 + 1e-12)
        .verdict("parseval_oracle_agrees", max_oracle <= 1e-9)
        .verdict("first_harmonic_equality", max_eq <= 1e-6);

    let mut curve_violations = 0;
    let (mut max_k, mut max_s) = (0.0f64, 0.0f64);
    let corpus = random_corpus(seed, cases / 10);
    for spec in &corpus {
        let Ok(c) = corpus_curve(spec, CORPUS_VERTICES) else {
            curve_violations += 1;
            continue;
        };
        let (m, osc) = metrics_with_terms(&c).expect("uniform corpus curve");
        let [k, s] = curve_wirtinger_check(&m, &osc);
        max_k = max_k.max(k.rhs / k.lhs);
        max_s = max_s.max(s.rhs / s.lhs);
        if !k.holds || !s.holds {
            curve_violations += 1;
        }
    }
    let curves = Report::new("curve-curvature")
        .value("curves", corpus.len() as f64)
        .value("max_kosc_over_bound", max_k)
        .value("max_sup_over_bound", max_s)
        .verdict("no_violations", curve_violations == 0);
    SuiteOutcome::new(
        "wirtinger",
        seed,
        2 * cases + corpus.len(),
        violations + curve_violations,
        vec![functions, curves],
    )
}

/// Elementary symmetric functions by summing over all subsets.
fn symmetric_by_subsets(l: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; l.len() + 1];
    for mask in 0u32..(1 << l.len()) {
        let prod: f64 = (0..l.len())
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| l[j])
            .product();
        e[mask.count_ones() as usize] += prod;
    }
    e
}

/// Newton's inequality at every valid index and the harmonic sum bound on
/// random positive vectors, with the symmetric functions cross-checked by
/// subset enumeration.
pub fn newton_suite(seed: u64, cases: usize) -> SuiteOutcome {
    let mut g = rng(seed);
    let mut violations = 0;
    let mut checks = 0;
    let (mut min_gap, mut min_h_gap, mut max_oracle) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for _ in 0..cases {
        let len = g.gen_range(2..=12);
        let l: Vec<f64> = (0..len)
            .map(|_| g.gen_range((0.01f64).ln()..(100.0f64).ln()).exp())
            .collect();
        let fast = elementary_symmetric(&l);
        let slow = symmetric_by_subsets(&l);
        let oracle = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).abs() / b.abs())
            .fold(0.0, f64::max);
        max_oracle = max_oracle.max(oracle);
        if oracle > 1e-10 {
            violations += 1;
        }
        for i in 0..=len - 2 {
            let v = newton_ratio_check(&l, i).expect("valid input");
            checks += 1;
            min_gap = min_gap.min(v.relative_gap());
            if !v.holds {
                violations += 1;
            }
        }
        let h = harmonic_sum_bound_check(&l).expect("valid input");
        checks += 1;
        min_h_gap = min_h_gap.min(h.relative_gap());
        if !h.holds {
            violations += 1;
        }
    }
    let mut eq_gap = 0.0f64;
    for len in 2..=12 {
        let l = vec![1.7; len];
        for i in 0..=len - 2 {
            eq_gap = eq_gap.max(newton_ratio_check(&l, i).expect("valid input").relative_gap().abs());
        }
        eq_gap = eq_gap.max(harmonic_sum_bound_check(&l).expect("valid input").relative_gap().abs());
    }
    let report = Report::new("newton")
        .value("vectors", cases as f64)
        .value("checks", checks as f64)
        .value("min_newton_gap", min_gap)
        .value("min_harmonic_gap", min_h_gap)
        .value("max_subset_oracle_error", max_oracle)
        .value("max_equality_gap", eq_gap)
        .verdict("subset_oracle_agrees", max_oracle <= 1e-10)
        .verdict("equal_entries_equality", eq_gap <= 1e-12);
    SuiteOutcome::new("newton", seed, checks, violations, vec![report])
}

/// Random perturbed circles, limacons and lemniscates.
///
/// Perturbed circles are star-shaped radial graphs. Limacons avoid the
/// cardioid neighbourhood so that both the dimpled and the inner-loop
/// branches stay resolved at corpus resolution.
pub fn random_corpus(seed: u64, count: usize) -> Vec<ShapeSpec> {
    let mut g = rng(seed ^ 0x5eed_c0de);
    (0..count)
        .map(|i| match i % 10 {
            0..=3 => {
                let k = g.gen_range(1..=3);
                let modes = (0..k)
                    .map(|_| Mode {
                        m: g.gen_range(2..=8),
                        eps: g.gen_range(0.0..0.3 / k as f64),
                        phase: g.gen_range(0.0..2.0 * PI),
                    })
                    .collect();
                ShapeSpec::FourierCircle {
                    r0: g.gen_range(0.5..2.0),
                    modes,
                }
            }
            4..=6 => {
                let b = g.gen_range(0.5..1.5);
                let ratio = if g.gen_bool(0.5) {
                    g.gen_range(0.1..0.7)
                } else {
                    g.gen_range(1.3..3.0)
                };
                ShapeSpec::Limacon { a: ratio * b, b }
            }
            _ => ShapeSpec::Lemniscate {
                scale: g.gen_range(0.3..3.0),
            },
        })
        .collect()
}

/// Corpus curve resampled uniformly in arc length.
pub fn corpus_curve(spec: &ShapeSpec, n: usize) -> Result<SampledCurve> {
    resample_uniform(&generate(spec, n)?, n)
}

fn kind(spec: &ShapeSpec) -> &'static str {
    match spec {
        ShapeSpec::Circle { .. } => "circle",
        ShapeSpec::Ellipse { .. } => "ellipse",
        ShapeSpec::FourierCircle { .. } => "fourier-circle",
        ShapeSpec::Limacon { .. } => "limacon",
        ShapeSpec::Lemniscate { .. } => "lemniscate",
    }
}

/// `K_osc >= 16 m^2 - 4 omega^2 pi^2` over a random corpus with `m` measured
/// by segment crossings, plus the canonical lemniscate.
pub fn multiplicity_corpus_suite(seed: u64, count: usize) -> Result<SuiteOutcome> {
    let corpus = random_corpus(seed, count);
    let mut violations = 0;
    let mut by_kind: std::collections::BTreeMap<&str, (usize, u32, f64)> = Default::default();
    for spec in &corpus {
        let c = corpus_curve(spec, CORPUS_VERTICES)?;
        let (m, _) = metrics_with_terms(&c)?;
        let mult = find_crossings(&c, default_eps(&c))?.multiplicity;
        let check = multiplicity_check(&m, mult)?;
        if !check.holds {
            violations += 1;
        }
        let e = by_kind.entry(kind(spec)).or_insert((0, 0, f64::INFINITY));
        e.0 += 1;
        e.1 = e.1.max(mult);
        e.2 = e.2.min(check.margin);
    }
    let mut reports: Vec<Report> = by_kind
        .into_iter()
        .map(|(k, (count, max_m, min_margin))| {
            Report::new(format!("corpus-{k}"))
                .value("curves", count as f64)
                .value("max_multiplicity", max_m as f64)
                .value("min_margin", min_margin)
                .verdict("no_violations", min_margin >= 0.0)
        })
        .collect();
    let lem = corpus_curve(&ShapeSpec::Lemniscate { scale: 1.0 }, 512)?;
    let (m, _) = metrics_with_terms(&lem)?;
    let mult = find_crossings(&lem, default_eps(&lem))?.multiplicity;
    let check = multiplicity_check(&m, mult)?;
    reports.push(
        check
            .to_report()
            .verdict("margin_positive", check.margin > 0.0)
            .verdict("lemniscate_double_point", mult == 2 && m.winding_number == 0),
    );
    Ok(SuiteOutcome::new(
        "multiplicity-corpus",
        seed,
        corpus.len() + 1,
        violations,
        reports,
    ))
}

/// Area drift, monotonicity of length and isoperimetric ratio, and identity
/// residuals along a recorded run.
pub fn run_identity_report(name: &str, out: &RunOutcome) -> Result<Report> {
    let recs = &out.records;
    let a0 = recs[0].metrics.signed_area;
    let l0 = recs[0].metrics.length;
    let drift = recs
        .iter()
        .map(|r| (r.metrics.signed_area - a0).abs() / a0.abs())
        .fold(0.0, f64::max);
    let slack = MONOTONE_SLACK * l0;
    let l_up = recs
        .windows(2)
        .map(|w| w[1].metrics.length - w[0].metrics.length)
        .fold(f64::NEG_INFINITY, f64::max);
    let i_up = recs
        .windows(2)
        .filter_map(|w| Some(w[1].metrics.isoperimetric_ratio? - w[0].metrics.isoperimetric_ratio?))
        .fold(f64::NEG_INFINITY, f64::max);
    let res = identity_residuals(recs)?;
    Ok(Report::new(name)
        .value("t_end", recs[recs.len() - 1].t)
        .value("max_area_drift", drift)
        .value("max_length_increase", l_up)
        .value("max_iso_increase", i_up)
        .value("length_residual", res.length.max)
        .value("length_resolved", res.length.resolved as f64)
        .value("length_per_step_residual", res.length_per_step.max)
        .value("average_curvature_residual", res.average_curvature.max)
        .value("osc_energy_residual", res.osc_energy.max)
        .value("osc_energy_resolved", res.osc_energy.resolved as f64)
        .verdict("no_blow_up", !out.termination.is_blow_up())
        .verdict("area_conserved", drift <= AREA_DRIFT_TOL)
        .verdict("length_nonincreasing", l_up <= slack)
        .verdict("iso_nonincreasing", i_up <= MONOTONE_SLACK)
        .verdict("length_identity", res.length.max <= LENGTH_IDENTITY_TOL)
        .verdict("average_curvature_identity", res.average_curvature.max <= CURVATURE_IDENTITY_TOL)
        .verdict("osc_energy_identity", res.osc_energy.max <= CURVATURE_IDENTITY_TOL))
}

/// Reference runs at `n = 256`, `dt = 1e-4`.
pub fn flow_identities_suite() -> Result<SuiteOutcome> {
    let cfg = FlowConfig::default();
    let scenarios = [
        ("perturbed-circle", ShapeSpec::fourier(1.0, &[(2, 0.01)]), 1.0),
        ("ellipse", ShapeSpec::Ellipse { a: 1.5, b: 2.0 / 3.0 }, 0.5),
    ];
    let mut reports = Vec::new();
    for (name, spec, t) in scenarios {
        let c = generate(&spec, cfg.n)?;
        let out = run(&c, &cfg.with_max_time(t))?;
        reports.push(run_identity_report(name, &out)?);
    }
    Ok(SuiteOutcome::new("flow-identities", 0, reports.len(), 0, reports))
}

/// Density integral `8 m` at a point of multiplicity `m`, with the observed
/// convergence order under refinement on the circle.
pub fn density_suite() -> Result<SuiteOutcome> {
    let circle = |n: usize| -> Result<SampledCurve> {
        Ok(generate(&ShapeSpec::circle(1.0), n)?.translated(Point::new(1.0, 0.0)))
    };
    let origin = Point::new(0.0, 0.0);
    let errors: Vec<f64> = [256, 512, 1024]
        .into_iter()
        .map(|n| Ok((density_integral(&circle(n)?, origin)?.value - 8.0).abs()))
        .collect::<Result<_>>()?;
    let order = (errors[0] / errors[1]).log2().min((errors[1] / errors[2]).log2());
    let circle_value = density_integral(&circle(1024)?, origin)?.value;
    let mut reports = vec![Report::new("circle-through-origin")
        .value("value_n1024", circle_value)
        .value("error_n256", errors[0])
        .value("error_n512", errors[1])
        .value("error_n1024", errors[2])
        .value("observed_order", order)
        .verdict("value_within_1e-2", (circle_value - 8.0).abs() <= 1e-2)
        .verdict("order_at_least_1", order >= 1.0)];
    for (name, spec) in [
        ("lemniscate-crossing", ShapeSpec::Lemniscate { scale: 1.0 }),
        ("limacon-pole", ShapeSpec::Limacon { a: 0.5, b: 1.0 }),
    ] {
        let c = corpus_curve(&spec, 1024)?;
        let set = find_crossings(&c, default_eps(&c))?;
        let Some(cluster) = set.densest() else {
            reports.push(Report::new(name).verdict("crossing_found", false));
            continue;
        };
        let d = density_integral(&c, cluster.center)?;
        let expected = 8.0 * cluster.branches as f64;
        reports.push(
            d.to_report()
                .value("expected", expected)
                .verdict("value_within_5pct", (d.value - expected).abs() <= 0.05 * expected),
        );
    }
    Ok(SuiteOutcome::new("density", 0, reports.len(), 0, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_oracle_matches_recurrence() {
        let l = [0.5, 2.0, 3.0, 7.0];
        let a = elementary_symmetric(&l);
        let b = symmetric_by_subsets(&l);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = random_corpus(7, 30);
        assert_eq!(a, random_corpus(7, 30));
        assert_ne!(a, random_corpus(8, 30));
        for spec in &a {
            corpus_curve(spec, 128).unwrap();
        }
    }

    #[test]
    fn small_inequality_suites_pass() {
        let w = wirtinger_suite(3, 50);
        assert!(w.passed, "{}", w.to_table());
        let n = newton_suite(3, 50);
        assert!(n.passed, "{}", n.to_table());
    }

    #[test]
    fn unknown_suite_lists_names() {
        let err = run_suite("nope", 0).unwrap_err().to_string();
        assert!(err.contains("multiplicity-corpus"));
    }
}
