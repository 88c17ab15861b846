//! The `simulate`, `analyze` and `verify` commands.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use curvediff_core::analysis::{
    certificate_from_metrics, curve_wirtinger_check, density_integral, l1_energy_check, multiplicity_check,
    roundness, waiting_time_bound, waiting_time_check, Certificate, HypothesisReport, Report,
};
use curvediff_core::flow::run_with;
use curvediff_core::geometry::{generate, metrics_with_terms, resample_uniform, CurveMetrics};
use curvediff_core::intersections::{default_eps, find_crossings};
use curvediff_core::io::{read_curve_csv, trajectory_to_jsonl, write_atomic, write_curve_csv};
use curvediff_core::suites::{run_identity_report, run_suite};
use curvediff_core::{CrossingSet, Error, Result, SampledCurve, Termination};

use crate::manifest::RunManifest;
use crate::svg::{render_frame, Viewport};

/// Relative radial deviation accepted by the final roundness report.
pub const ROUNDNESS_TOL: f64 = 1e-3;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Bad usage or input, or a verification suite that did not pass.
    Usage = 1,
    BlowUp = 2,
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    manifest: String,
    output_dir: &'a Path,
    termination: &'a Termination,
    steps: u64,
    t_end: f64,
    snapshots: Vec<u64>,
    reports: &'a [Report],
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".curvediff-probe");
    write_atomic(&probe, b"")?;
    fs::remove_file(&probe)?;
    Ok(())
}

fn print_reports(reports: &[Report]) {
    for r in reports {
        print!("{}", r.to_table());
    }
}

/// Runs the manifest and writes its outputs.
///
/// Returns [`Status::BlowUp`] when the run ended on a blow-up signal; the
/// outputs then cover the run up to the last accepted state.
pub fn simulate(manifest: &RunManifest, root: Option<&Path>) -> Result<Status> {
    let dir = manifest.resolve_output_dir(root);
    ensure_writable(&dir).map_err(|e| Error::InvalidInput(format!("output directory {}: {e}", dir.display())))?;

    let initial = generate(&manifest.shape, manifest.flow.n)?;
    let every = manifest.snapshot_every();
    let mut snapshots: Vec<(u64, SampledCurve)> = Vec::new();
    let outcome = run_with(&initial, &manifest.flow, |state, _| {
        if state.step_index % every == 0 {
            snapshots.push((state.step_index, state.curve.clone()));
        }
    })?;
    let last = &outcome.final_state;
    if snapshots.last().map(|s| s.0) != Some(last.step_index) {
        snapshots.push((last.step_index, last.curve.clone()));
    }
    let records = &outcome.records;
    let first = &records[0].metrics;

    let mut reports = vec![HypothesisReport::from_metrics(first).to_report()];
    reports.push(l1_energy_check(records)?.to_report());
    reports.push(waiting_time_check(records)?.to_report());
    if records.len() >= 3 {
        reports.push(run_identity_report("identities", &outcome)?);
    }
    if !outcome.termination.is_blow_up() && first.winding_number.abs() == 1 {
        let r = roundness(&last.curve, first.signed_area)?;
        reports.push(r.to_report(ROUNDNESS_TOL));
    }

    if manifest.outputs.trajectory {
        write_atomic(&dir.join("trajectory.jsonl"), trajectory_to_jsonl(records).as_bytes())?;
    }
    if manifest.outputs.snapshots {
        for (step, curve) in &snapshots {
            write_curve_csv(&dir.join(format!("snapshot_{step}.csv")), curve)?;
        }
    }
    if manifest.outputs.svg {
        let view = Viewport::containing(snapshots.iter().map(|(_, c)| c));
        for (step, curve) in &snapshots {
            let label = format!("step {step}  t = {:.4}", *step as f64 * manifest.flow.dt);
            write_atomic(
                &dir.join(format!("snapshot_{step}.svg")),
                render_frame(curve, &view, &label).as_bytes(),
            )?;
        }
    }
    let summary = SimulationSummary {
        manifest: manifest.to_text(),
        output_dir: &dir,
        termination: &outcome.termination,
        steps: last.step_index,
        t_end: last.time,
        snapshots: snapshots.iter().map(|s| s.0).collect(),
        reports: &reports,
    };
    if manifest.outputs.summary {
        write_atomic(&dir.join("summary.json"), serde_json::to_string_pretty(&summary)?.as_bytes())?;
    }

    println!(
        "run ended after {} steps at t = {:.6}: {}",
        last.step_index,
        last.time,
        describe(&outcome.termination)
    );
    print_reports(&reports);
    println!("outputs in {}", dir.display());
    Ok(if outcome.termination.is_blow_up() {
        Status::BlowUp
    } else {
        Status::Ok
    })
}

fn describe(t: &Termination) -> String {
    match t {
        Termination::MaxTime => "reached max_time".into(),
        Termination::MaxSteps => "reached max_steps".into(),
        Termination::KoscBelow => "oscillation energy fell below kosc_below".into(),
        Termination::BlowUp(why) => format!("blow-up ({why})"),
    }
}

/// Combined analysis of one curve file.
#[derive(Debug, Serialize)]
pub struct CurveAnalysis {
    pub source: PathBuf,
    pub vertices: usize,
    /// The input was not uniform in arc length and was resampled.
    pub resampled: bool,
    pub metrics: CurveMetrics,
    pub crossings: CrossingSet,
    pub certificate: Certificate,
    pub reports: Vec<Report>,
}

pub fn analyze_curve(source: &Path, curve: &SampledCurve) -> Result<CurveAnalysis> {
    let resampled = !curve.is_uniform();
    let curve = if resampled {
        resample_uniform(curve, curve.len())?
    } else {
        curve.clone()
    };
    let (m, osc) = metrics_with_terms(&curve)?;
    let crossings = find_crossings(&curve, default_eps(&curve))?;
    let certificate = certificate_from_metrics(&m);

    let mut reports = vec![
        Report::new("metrics")
            .value("L", m.length)
            .value("A", m.signed_area)
            .value("I", m.isoperimetric_ratio.unwrap_or(f64::NAN))
            .value("omega", m.winding_number as f64)
            .value("kbar", m.average_curvature)
            .value("kosc", m.osc_energy)
            .value("ks2", m.ks_norm_sq)
            .value("kss2", m.kss_norm_sq)
            .value("kmin", m.min_curvature)
            .value("waiting_time_bound", waiting_time_bound(m.length, m.signed_area)?),
        HypothesisReport::from_metrics(&m).to_report(),
        multiplicity_check(&m, crossings.multiplicity)?
            .to_report()
            .value("crossings", crossings.crossings.len() as f64)
            .value("clusters", crossings.clusters.len() as f64),
    ];
    let [l2, sup] = curve_wirtinger_check(&m, &osc);
    reports.push(
        Report::new("curve-wirtinger")
            .value("kosc", l2.rhs)
            .value("kosc_bound", l2.lhs)
            .value("sup_dev_sq", sup.rhs)
            .value("sup_dev_sq_bound", sup.lhs)
            .verdict("l2_holds", l2.holds)
            .verdict("sup_holds", sup.holds),
    );
    let cert = Report::new("certificate").advise("certified_embedded", certificate.is_certified());
    reports.push(match &certificate {
        Certificate::CertifiedEmbedded => cert,
        Certificate::Inconclusive(why) => cert.note(why.clone()),
    });
    if let Some(cluster) = crossings.densest() {
        let r = match density_integral(&curve, cluster.center) {
            Ok(d) => d.to_report().value("branches", cluster.branches as f64),
            Err(e) => Report::new("density").note(format!("not evaluated: {e}")),
        };
        reports.push(r);
    }
    Ok(CurveAnalysis {
        source: source.to_path_buf(),
        vertices: curve.len(),
        resampled,
        metrics: m,
        crossings,
        certificate,
        reports,
    })
}

/// Where the report for `csv` goes: next to it, or under `root` when set.
pub fn analysis_path(csv: &Path, root: Option<&Path>) -> PathBuf {
    let stem = csv.file_stem().map_or("curve".into(), |s| s.to_string_lossy().into_owned());
    let name = format!("{stem}.report.json");
    match root {
        Some(r) => r.join(name),
        None => csv.with_file_name(name),
    }
}

pub fn analyze(csv: &Path, out: Option<&Path>, root: Option<&Path>) -> Result<Status> {
    let curve = read_curve_csv(csv)?;
    let analysis = analyze_curve(csv, &curve)?;
    let path = out.map_or_else(|| analysis_path(csv, root), Path::to_path_buf);
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let json = serde_json::to_string_pretty(&analysis)?;
    write_atomic(&path, json.as_bytes())?;
    println!("{json}");
    print_reports(&analysis.reports);
    println!("report written to {}", path.display());
    Ok(Status::Ok)
}

pub fn verify(suite: &str, seed: u64) -> Result<Status> {
    let outcome = run_suite(suite, seed)?;
    print!("{}", outcome.to_table());
    Ok(if outcome.passed { Status::Ok } else { Status::Usage })
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvediff_core::ShapeSpec;

    #[test]
    fn report_path_follows_root() {
        let p = Path::new("data/loop.csv");
        assert_eq!(analysis_path(p, None), PathBuf::from("data/loop.report.json"));
        assert_eq!(analysis_path(p, Some(Path::new("/r"))), PathBuf::from("/r/loop.report.json"));
    }

    #[test]
    fn lemniscate_analysis() {
        let c = generate(&ShapeSpec::Lemniscate { scale: 1.0 }, 512).unwrap();
        let a = analyze_curve(Path::new("l.csv"), &c).unwrap();
        assert!(a.resampled);
        assert_eq!(a.metrics.winding_number, 0);
        assert_eq!(a.crossings.multiplicity, 2);
        assert!(!a.certificate.is_certified());
        let mult = a.reports.iter().find(|r| r.name == "multiplicity").unwrap();
        assert_eq!(mult.values["bound"], 64.0);
        assert!(mult.values["margin"] > 0.0 && mult.passed());
        let density = a.reports.iter().find(|r| r.name == "density").unwrap();
        assert!((density.values["value"] - 16.0).abs() < 0.8, "{density:?}");
    }
}
