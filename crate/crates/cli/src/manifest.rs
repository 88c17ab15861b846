//! Run manifests: a flat `key = value` file describing one simulation.
//!
//! ```text
//! # scenario
//! shape = fourier-circle        # circle | ellipse | fourier-circle | limacon | lemniscate
//! r0 = 1.0
//! modes = 2:0.01:0.0            # m:eps[:phase], comma separated
//! n = 256
//! # flow
//! dt = 0.0001
//! scheme = linearly-implicit    # linearly-implicit | linearly-implicit-euler | explicit-rk4
//! redistribution = every-step   # every-step | spread:<threshold>
//! max_time = 5.0                # optional; 1.0 when neither max_time nor max_steps is set
//! max_steps = 100000            # optional
//! kosc_below = 1e-12            # optional
//! k2_ceiling = 1000000.0
//! min_segment_ratio = 0.001
//! max_length_drop = 0.05
//! solve_tol = 1e-8
//! # outputs
//! output_dir = runs/perturbed   # relative paths resolve against $CURVEDIFF_OUTPUT_ROOT
//! snapshot_interval = 0.5
//! reports = trajectory,snapshots,svg,summary
//! seed = 0
//! ```
//!
//! Shape parameters: `circle` takes `radius` and `turns`, `ellipse` and
//! `limacon` take `a` and `b`, `fourier-circle` takes `r0` and `modes`,
//! `lemniscate` takes `scale`. Unknown or repeated keys are errors. Numbers
//! are written in shortest round-trip form, so [`RunManifest::to_text`]
//! followed by [`RunManifest::parse`] reproduces the manifest exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use curvediff_core::flow::{FlowConfig, Redistribution, Scheme, StopConditions};
use curvediff_core::geometry::{Mode, ShapeSpec};
use curvediff_core::{Error, Result};

/// Environment variable naming the root for relative output paths.
pub const OUTPUT_ROOT_ENV: &str = "CURVEDIFF_OUTPUT_ROOT";

/// Files a simulation writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outputs {
    pub trajectory: bool,
    pub snapshots: bool,
    pub svg: bool,
    pub summary: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            trajectory: true,
            snapshots: true,
            svg: false,
            summary: true,
        }
    }
}

impl Outputs {
    const NAMES: [&'static str; 4] = ["trajectory", "snapshots", "svg", "summary"];

    fn flags(&self) -> [bool; 4] {
        [self.trajectory, self.snapshots, self.svg, self.summary]
    }

    fn parse(s: &str) -> std::result::Result<Self, String> {
        let mut out = Outputs {
            trajectory: false,
            snapshots: false,
            svg: false,
            summary: false,
        };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let slot = match item {
                "trajectory" => &mut out.trajectory,
                "snapshots" => &mut out.snapshots,
                "svg" => &mut out.svg,
                "summary" => &mut out.summary,
                other => {
                    return Err(format!(
                        "unknown report '{other}', expected one of {}",
                        Self::NAMES.join(", ")
                    ))
                }
            };
            *slot = true;
        }
        Ok(out)
    }

    fn to_text(self) -> String {
        Self::NAMES
            .iter()
            .zip(self.flags())
            .filter(|(_, on)| *on)
            .map(|(name, _)| *name)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// One simulation: initial shape, solver settings and outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub shape: ShapeSpec,
    pub flow: FlowConfig,
    pub output_dir: PathBuf,
    /// Time between snapshots.
    pub snapshot_interval: f64,
    pub outputs: Outputs,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(shape: ShapeSpec, flow: FlowConfig, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            shape,
            flow,
            output_dir: output_dir.into(),
            snapshot_interval: 0.5,
            outputs: Outputs::default(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.flow.validate()?;
        if !(self.snapshot_interval.is_finite() && self.snapshot_interval > 0.0) {
            return Err(Error::InvalidInput(format!(
                "snapshot_interval must be positive, got {}",
                self.snapshot_interval
            )));
        }
        let dir = self.output_dir.to_string_lossy();
        if dir.is_empty() || dir.contains('\n') {
            return Err(Error::InvalidInput(format!("bad output_dir {dir:?}")));
        }
        Ok(())
    }

    /// Steps between snapshots, at least one.
    pub fn snapshot_every(&self) -> u64 {
        (self.snapshot_interval / self.flow.dt).round().max(1.0) as u64
    }

    /// `output_dir`, joined to `root` when relative.
    pub fn resolve_output_dir(&self, root: Option<&Path>) -> PathBuf {
        match root {
            Some(r) if self.output_dir.is_relative() => r.join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Entries::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim();
            if entries.map.insert(key.to_string(), (i + 1, value.trim().to_string())).is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate key '{key}'"),
                });
            }
        }

        let shape_name = entries.take_required("shape")?;
        let shape = match shape_name.1.as_str() {
            "circle" => ShapeSpec::Circle {
                radius: entries.number("radius")?.unwrap_or(1.0),
                turns: entries.integer("turns")?.unwrap_or(1) as u32,
            },
            "ellipse" => ShapeSpec::Ellipse {
                a: entries.required_number("a")?,
                b: entries.required_number("b")?,
            },
            "limacon" => ShapeSpec::Limacon {
                a: entries.required_number("a")?,
                b: entries.required_number("b")?,
            },
            "lemniscate" => ShapeSpec::Lemniscate {
                scale: entries.number("scale")?.unwrap_or(1.0),
            },
            "fourier-circle" => ShapeSpec::FourierCircle {
                r0: entries.number("r0")?.unwrap_or(1.0),
                modes: match entries.take("modes") {
                    Some((line, v)) => parse_modes(&v).map_err(|msg| Error::Parse { line, msg })?,
                    None => Vec::new(),
                },
            },
            other => {
                return Err(Error::Parse {
                    line: shape_name.0,
                    msg: format!(
                        "unknown shape '{other}', expected circle, ellipse, fourier-circle, limacon or lemniscate"
                    ),
                })
            }
        };

        let defaults = FlowConfig::default();
        let stop_defaults = StopConditions::default();
        let scheme = match entries.take("scheme") {
            Some((line, v)) => Scheme::parse(&v).ok_or_else(|| Error::Parse {
                line,
                msg: format!("unknown scheme '{v}'"),
            })?,
            None => defaults.scheme,
        };
        let redistribution = match entries.take("redistribution") {
            Some((line, v)) => parse_redistribution(&v).map_err(|msg| Error::Parse { line, msg })?,
            None => defaults.redistribution,
        };
        let mut stop = StopConditions {
            max_time: entries.number("max_time")?,
            max_steps: entries.integer("max_steps")?,
            kosc_below: entries.number("kosc_below")?,
            k2_ceiling: entries.number("k2_ceiling")?.unwrap_or(stop_defaults.k2_ceiling),
            min_segment_ratio: entries
                .number("min_segment_ratio")?
                .unwrap_or(stop_defaults.min_segment_ratio),
            max_length_drop: entries
                .number("max_length_drop")?
                .unwrap_or(stop_defaults.max_length_drop),
        };
        if stop.max_time.is_none() && stop.max_steps.is_none() {
            stop.max_time = stop_defaults.max_time;
        }
        let flow = FlowConfig {
            n: entries.integer("n")?.unwrap_or(defaults.n as u64) as usize,
            dt: entries.number("dt")?.unwrap_or(defaults.dt),
            scheme,
            redistribution,
            stop,
            solve_tol: entries.number("solve_tol")?.unwrap_or(defaults.solve_tol),
        };
        let output_dir = PathBuf::from(entries.take_required("output_dir")?.1);
        let snapshot_interval = entries.number("snapshot_interval")?.unwrap_or(0.5);
        let outputs = match entries.take("reports") {
            Some((line, v)) => Outputs::parse(&v).map_err(|msg| Error::Parse { line, msg })?,
            None => Outputs::default(),
        };
        let seed = entries.integer("seed")?.unwrap_or(0);

        if let Some((key, (line, _))) = entries.map.into_iter().next() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected key '{key}' for shape '{}'", shape_name.1),
            });
        }
        let manifest = RunManifest {
            shape,
            flow,
            output_dir,
            snapshot_interval,
            outputs,
            seed,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    /// Canonical text form; parses back to an equal manifest.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# scenario\n");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        match &self.shape {
            ShapeSpec::Circle { radius, turns } => {
                kv("shape", "circle".into());
                kv("radius", format!("{radius:?}"));
                kv("turns", turns.to_string());
            }
            ShapeSpec::Ellipse { a, b } => {
                kv("shape", "ellipse".into());
                kv("a", format!("{a:?}"));
                kv("b", format!("{b:?}"));
            }
            ShapeSpec::Limacon { a, b } => {
                kv("shape", "limacon".into());
                kv("a", format!("{a:?}"));
                kv("b", format!("{b:?}"));
            }
            ShapeSpec::Lemniscate { scale } => {
                kv("shape", "lemniscate".into());
                kv("scale", format!("{scale:?}"));
            }
            ShapeSpec::FourierCircle { r0, modes } => {
                kv("shape", "fourier-circle".into());
                kv("r0", format!("{r0:?}"));
                let list: Vec<String> = modes
                    .iter()
                    .map(|m| format!("{}:{:?}:{:?}", m.m, m.eps, m.phase))
                    .collect();
                kv("modes", list.join(","));
            }
        }
        let f = &self.flow;
        kv("n", f.n.to_string());
        kv("dt", format!("{:?}", f.dt));
        kv("scheme", f.scheme.name().into());
        kv(
            "redistribution",
            match f.redistribution {
                Redistribution::EveryStep => "every-step".into(),
                Redistribution::WhenSpreadExceeds(x) => format!("spread:{x:?}"),
            },
        );
        if let Some(t) = f.stop.max_time {
            kv("max_time", format!("{t:?}"));
        }
        if let Some(k) = f.stop.max_steps {
            kv("max_steps", k.to_string());
        }
        if let Some(k) = f.stop.kosc_below {
            kv("kosc_below", format!("{k:?}"));
        }
        kv("k2_ceiling", format!("{:?}", f.stop.k2_ceiling));
        kv("min_segment_ratio", format!("{:?}", f.stop.min_segment_ratio));
        kv("max_length_drop", format!("{:?}", f.stop.max_length_drop));
        kv("solve_tol", format!("{:?}", f.solve_tol));
        kv("output_dir", self.output_dir.to_string_lossy().into_owned());
        kv("snapshot_interval", format!("{:?}", self.snapshot_interval));
        kv("reports", self.outputs.to_text());
        kv("seed", self.seed.to_string());
        s
    }
}

#[derive(Default)]
struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn take_required(&mut self, key: &str) -> Result<(usize, String)> {
        self.take(key)
            .ok_or_else(|| Error::InvalidInput(format!("manifest is missing '{key}'")))
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("'{key}' must be a number, got '{v}'"),
                })
            })
            .transpose()
    }

    fn required_number(&mut self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::InvalidInput(format!("manifest is missing '{key}'")))
    }

    fn integer(&mut self, key: &str) -> Result<Option<u64>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("'{key}' must be a nonnegative integer, got '{v}'"),
                })
            })
            .transpose()
    }
}

fn parse_modes(s: &str) -> std::result::Result<Vec<Mode>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            let bad = || format!("mode '{item}' must be m:eps or m:eps:phase");
            if !(2..=3).contains(&parts.len()) {
                return Err(bad());
            }
            Ok(Mode {
                m: parts[0].parse().map_err(|_| bad())?,
                eps: parts[1].parse().map_err(|_| bad())?,
                phase: match parts.get(2) {
                    Some(p) => p.parse().map_err(|_| bad())?,
                    None => 0.0,
                },
            })
        })
        .collect()
}

fn parse_redistribution(s: &str) -> std::result::Result<Redistribution, String> {
    if s == "every-step" {
        return Ok(Redistribution::EveryStep);
    }
    s.strip_prefix("spread:")
        .and_then(|x| x.trim().parse().ok())
        .map(Redistribution::WhenSpreadExceeds)
        .ok_or_else(|| format!("redistribution must be 'every-step' or 'spread:<threshold>', got '{s}'"))
}
