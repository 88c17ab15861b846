//! File formats: curve CSV, trajectory JSON lines, atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::flow::TrajectoryRecord;
use crate::geometry::{Point, SampledCurve};

/// Parses a curve from CSV text with header `x,y`, one vertex per row.
pub fn parse_curve_csv(text: &str) -> Result<SampledCurve> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.split(',').map(str::trim).eq(["x", "y"]) => {}
        Some((i, h)) => {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected header `x,y`, found `{h}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    let mut vertices = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("not a number: `{s}`"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    line: i + 1,
                    msg: format!("non-finite value `{s}`"),
                })
            }
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        vertices.push(Point::new(parse(fields[0])?, parse(fields[1])?));
    }
    SampledCurve::from_vertices(vertices)
}

/// CSV text for a curve. Values use the shortest round-trip representation.
pub fn curve_to_csv(curve: &SampledCurve) -> String {
    let mut s = String::from("x,y\n");
    for p in curve.vertices() {
        s.push_str(&format!("{:?},{:?}\n", p.x, p.y));
    }
    s
}

pub fn read_curve_csv(path: &Path) -> Result<SampledCurve> {
    parse_curve_csv(&fs::read_to_string(path)?)
}

/// Writes `contents` to a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

pub fn write_curve_csv(path: &Path, curve: &SampledCurve) -> Result<()> {
    write_atomic(path, curve_to_csv(curve).as_bytes())
}

/// JSON-lines text, one record per line.
pub fn trajectory_to_jsonl(records: &[TrajectoryRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_json_line());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, ShapeSpec};

    #[test]
    fn csv_round_trip_is_exact() {
        let c = generate(&ShapeSpec::Ellipse { a: 1.5, b: 0.7 }, 40).unwrap();
        let back = parse_curve_csv(&curve_to_csv(&c)).unwrap();
        assert_eq!(back.vertices(), c.vertices());
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(parse_curve_csv(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_curve_csv("a,b\n1,2\n"), Err(Error::Parse { line: 1, .. })));
        let mut text = curve_to_csv(&generate(&ShapeSpec::circle(1.0), 16).unwrap());
        text.push_str("NaN,1\n");
        assert!(matches!(parse_curve_csv(&text), Err(Error::Parse { line: 18, .. })));
        assert!(matches!(parse_curve_csv("x,y\n1,2,3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_curve_csv("x,y\n1,2\n"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
