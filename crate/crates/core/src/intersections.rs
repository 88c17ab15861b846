//! Self-intersections of sampled curves.
//!
//! All pairs of non-adjacent segments are tested after an axis-aligned
//! bounding-box rejection. Two segments closer than `eps` count as crossing,
//! so grazing contacts are reported too. Crossings are grouped by
//! single-linkage at radius `eps`; the branches through a cluster are the
//! runs of cyclically consecutive segment indices involved in it.
//!
//! A polygon cannot tell a tangential touch from a crossing below its
//! resolution, so a reported cluster may also be a near-contact within `eps`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{point_segment_distance, Point, SampledCurve};

/// Default crossing tolerance relative to the curve length.
pub const DEFAULT_EPS_RELATIVE: f64 = 1e-6;

/// `DEFAULT_EPS_RELATIVE * L`.
pub fn default_eps(curve: &SampledCurve) -> f64 {
    DEFAULT_EPS_RELATIVE * curve.polygon_length()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub point: Point,
    /// Indices `i < j` of the segments `[X_i, X_{i+1}]` and `[X_j, X_{j+1}]`.
    pub segments: (usize, usize),
    pub cluster: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Mean of the member crossing points.
    pub center: Point,
    /// Indices into [`CrossingSet::crossings`].
    pub members: Vec<usize>,
    /// Number of distinct local branches through the cluster.
    pub branches: usize,
}

/// Crossings, their clusters and the multiplicity of the curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingSet {
    pub eps: f64,
    pub crossings: Vec<Crossing>,
    pub clusters: Vec<Cluster>,
    /// Largest number of branches through one cluster, or 1 without crossings.
    pub multiplicity: u32,
}

impl CrossingSet {
    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Cluster with the most branches.
    pub fn densest(&self) -> Option<&Cluster> {
        self.clusters.iter().max_by_key(|c| c.branches)
    }
}

fn aabb_gap(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    let gx = (a0.x.min(a1.x) - b0.x.max(b1.x)).max(b0.x.min(b1.x) - a0.x.max(a1.x));
    let gy = (a0.y.min(a1.y) - b0.y.max(b1.y)).max(b0.y.min(b1.y) - a0.y.max(a1.y));
    gx.max(gy)
}

/// Closest points of two segments, or their intersection point when they
/// cross properly.
fn segment_contact(a0: Point, a1: Point, b0: Point, b1: Point) -> (f64, Point) {
    let (da, db) = (a1 - a0, b1 - b0);
    let denom = da.cross(db);
    if denom != 0.0 {
        let w = b0 - a0;
        let s = w.cross(db) / denom;
        let t = w.cross(da) / denom;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
            return (0.0, a0 + da * s);
        }
    }
    // Otherwise the minimum distance is attained at an endpoint.
    let closest = |p: Point, q0: Point, q1: Point| {
        let e = q1 - q0;
        let len2 = e.dot(e);
        let t = if len2 > 0.0 { ((p - q0).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
        q0 + e * t
    };
    [(a0, b0, b1), (a1, b0, b1), (b0, a0, a1), (b1, a0, a1)]
        .into_iter()
        .map(|(p, q0, q1)| {
            let c = closest(p, q0, q1);
            ((p - c).norm(), (p + c) * 0.5)
        })
        .fold((f64::INFINITY, Point::default()), |best, cand| if cand.0 < best.0 { cand } else { best })
}

/// Number of runs of cyclically consecutive indices, where indices at most
/// `gap` apart belong to one run.
fn count_runs(mut idx: Vec<usize>, n: usize, gap: usize) -> usize {
    idx.sort_unstable();
    idx.dedup();
    match idx.len() {
        0 => 0,
        1 => 1,
        len => {
            let breaks = (0..len)
                .filter(|&a| {
                    let next = idx[(a + 1) % len];
                    let step = (next + n - idx[a]) % n;
                    step > gap
                })
                .count();
            breaks.max(1)
        }
    }
}

/// All self-crossings of `curve` within distance `eps`.
pub fn find_crossings(curve: &SampledCurve, eps: f64) -> Result<CrossingSet> {
    if !(eps.is_finite() && eps > 0.0) {
        return invalid(format!("eps must be positive, got {eps}"));
    }
    let n = curve.len();
    let v = curve.vertices();
    let seg = |i: usize| (v[i], v[(i + 1) % n]);
    let mut crossings = Vec::new();
    for i in 0..n {
        let (a0, a1) = seg(i);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b0, b1) = seg(j);
            if aabb_gap(a0, a1, b0, b1) > eps {
                continue;
            }
            let (dist, point) = segment_contact(a0, a1, b0, b1);
            if dist <= eps {
                crossings.push(Crossing {
                    point,
                    segments: (i, j),
                    cluster: usize::MAX,
                });
            }
        }
    }

    // Single-linkage clustering by flood fill.
    let mut clusters = Vec::new();
    for start in 0..crossings.len() {
        if crossings[start].cluster != usize::MAX {
            continue;
        }
        let id = clusters.len();
        crossings[start].cluster = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let p = crossings[members[head]].point;
            head += 1;
            for q in 0..crossings.len() {
                if crossings[q].cluster == usize::MAX && (crossings[q].point - p).norm() <= eps {
                    crossings[q].cluster = id;
                    members.push(q);
                }
            }
        }
        members.sort_unstable();
        let sum = members
            .iter()
            .fold(Point::default(), |acc, &m| acc + crossings[m].point);
        let segs: Vec<usize> = members
            .iter()
            .flat_map(|&m| [crossings[m].segments.0, crossings[m].segments.1])
            .collect();
        clusters.push(Cluster {
            center: sum * (1.0 / members.len() as f64),
            branches: count_runs(segs, n, 1).max(2),
            members,
        });
    }
    let multiplicity = clusters.iter().map(|c| c.branches).max().unwrap_or(1) as u32;
    Ok(CrossingSet {
        eps,
        crossings,
        clusters,
        multiplicity,
    })
}

/// True when the curve has no crossings within `eps`.
pub fn is_embedded(curve: &SampledCurve, eps: f64) -> Result<bool> {
    Ok(find_crossings(curve, eps)?.is_empty())
}

/// Multiplicity by sampling the trace: at each of `per_segment` points on
/// every segment, counts the distinct branches of the polygon passing within
/// the sample spacing. Independent of the segment intersection test.
pub fn brute_force_multiplicity(curve: &SampledCurve, per_segment: usize) -> Result<u32> {
    if per_segment == 0 {
        return invalid("per_segment must be positive");
    }
    let n = curve.len();
    let v = curve.vertices();
    let mut best = 1;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let tol = (b - a).norm() / per_segment as f64;
        for s in 0..per_segment {
            let p = a + (b - a) * (s as f64 / per_segment as f64);
            let near: Vec<usize> = (0..n)
                .filter(|&j| point_segment_distance(p, v[j], v[(j + 1) % n]) <= tol)
                .collect();
            best = best.max(count_runs(near, n, 1));
        }
    }
    Ok(best as u32)
}
