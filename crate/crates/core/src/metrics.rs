//! Error norms, front reconstruction at a fixed time, Hausdorff distances,
//! convergence fits and spacing histograms.

use std::collections::{BTreeMap, BTreeSet};

use delaunator::{triangulate, Point};
use serde::Serialize;

use crate::error::MetricsError;
use crate::frames::{Frame, Vec3};
use crate::march::FrontGraph;
use crate::speed::Example;
use crate::PointId;

/// `|φ(x, y, t)|` for the exact level-set function of `example`.
pub fn point_error(p: Vec3, example: Example) -> Result<f64, MetricsError> {
    Ok(example.exact_phi(p.x, p.y, p.z)?.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Discrete norms weighted by `h²`.
pub fn norms(errors: &[f64], h: f64) -> Result<Norms, MetricsError> {
    if errors.is_empty() {
        return Err(MetricsError::Empty);
    }
    let w = h * h;
    Ok(Norms {
        l1: w * errors.iter().sum::<f64>(),
        l2: (w * errors.iter().map(|e| e * e).sum::<f64>()).sqrt(),
        linf: errors.iter().copied().fold(0.0, f64::max),
    })
}

/// Per-point errors of a run. Points outside the exact solution's validity
/// window get `None` and are left out of the norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub errors: Vec<Option<f64>>,
    pub excluded: usize,
    pub norms: Norms,
}

pub fn error_report(graph: &FrontGraph, example: Example) -> Result<ErrorReport, MetricsError> {
    let errors: Vec<Option<f64>> = graph.accepted_points().map(|p| point_error(p.pos, example).ok()).collect();
    let valid: Vec<f64> = errors.iter().flatten().copied().collect();
    Ok(ErrorReport {
        excluded: errors.len() - valid.len(),
        norms: norms(&valid, graph.h)?,
        errors,
    })
}

/// Slice of the reconstructed surface at one time.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrontSlice {
    pub time: f64,
    pub points: Vec<[f64; 2]>,
    /// Index pairs into `points`.
    pub segments: Vec<(usize, usize)>,
}

impl FrontSlice {
    /// Connected pieces, joining pieces whose points come within `gap`.
    pub fn components(&self, gap: f64) -> usize {
        let n = self.points.len();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.segments {
            uf.union(a, b);
        }
        let cell = gap.max(f64::MIN_POSITIVE);
        let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            let key = ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
            grid.entry(key).or_default().push(i);
        }
        for (i, p) in self.points.iter().enumerate() {
            let (cx, cy) = ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for &j in grid.get(&(cx + dx, cy + dy)).into_iter().flatten() {
                        if j > i && dist2(*p, self.points[j]) <= gap * gap {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
        (0..n).filter(|&i| uf.find(i) == i).count()
    }

    /// Distance from `q` to the nearest segment, or point if there are none.
    pub fn distance_to(&self, q: [f64; 2]) -> f64 {
        if self.segments.is_empty() {
            return self.points.iter().map(|&p| dist2(p, q)).fold(f64::INFINITY, f64::min).sqrt();
        }
        self.segments
            .iter()
            .map(|&(a, b)| segment_distance(q, self.points[a], self.points[b]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Intersects the locally triangulated graph surface with the plane `t = time`.
///
/// Every accepted point near `time` is triangulated with its `neighbours`
/// nearest accepted points in its own tangent plane; the triangles around it
/// are kept, deduplicated by vertex ids, and cut by the plane.
pub fn reconstruct_front(graph: &FrontGraph, time: f64, neighbours: usize) -> Result<FrontSlice, MetricsError> {
    let (lo, hi) = graph
        .accepted_points()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.pos.z), hi.max(p.pos.z)));
    if !(time >= lo && time <= hi) {
        return Err(MetricsError::OutsideCoverage { t: time, lo, hi });
    }
    let h = graph.h;
    let pool: Vec<PointId> = graph.accepted.iter().copied().filter(|id| (graph.point(*id).pos.z - time).abs() <= 12.0 * h).collect();
    let index = SpatialHash::new(pool.iter().map(|id| graph.point(*id).pos).collect(), 2.0 * h);

    let mut triangles: BTreeSet<[PointId; 3]> = BTreeSet::new();
    for (k, &id) in pool.iter().enumerate() {
        let p = graph.point(id);
        if (p.pos.z - time).abs() > 4.0 * h {
            continue;
        }
        let Ok(frame) = Frame::from_normal(p.normal) else {
            continue;
        };
        let near = index.nearest(k, neighbours);
        let mut ids = vec![id];
        let mut flat = vec![Point { x: 0.0, y: 0.0 }];
        for j in near {
            let q = frame.to_local(index.points[j] - p.pos);
            ids.push(pool[j]);
            flat.push(Point { x: q.x, y: q.y });
        }
        let tri = triangulate(&flat);
        for t in tri.triangles.chunks_exact(3) {
            if !t.contains(&0) {
                continue;
            }
            let mut key = [ids[t[0]], ids[t[1]], ids[t[2]]];
            key.sort();
            triangles.insert(key);
        }
    }

    let mut slice = FrontSlice {
        time,
        ..FrontSlice::default()
    };
    let mut vertex_at: BTreeMap<(PointId, PointId), usize> = BTreeMap::new();
    let mut crossing = |a: PointId, b: PointId, slice: &mut FrontSlice| -> Option<usize> {
        let (pa, pb) = (graph.point(a).pos, graph.point(b).pos);
        let (da, db) = (pa.z - time, pb.z - time);
        let key = match (da == 0.0, db == 0.0) {
            (true, _) => (a, a),
            (_, true) => (b, b),
            _ if da * db < 0.0 => (a.min(b), a.max(b)),
            _ => return None,
        };
        Some(*vertex_at.entry(key).or_insert_with(|| {
            let s = if key.0 == key.1 { if key.0 == a { 0.0 } else { 1.0 } } else { da / (da - db) };
            let q = pa + (pb - pa) * s;
            slice.points.push([q.x, q.y]);
            slice.points.len() - 1
        }))
    };
    let mut seen = BTreeSet::new();
    for [a, b, c] in triangles {
        let mut cut: Vec<usize> = [(a, b), (b, c), (c, a)].into_iter().filter_map(|(x, y)| crossing(x, y, &mut slice)).collect();
        cut.sort();
        cut.dedup();
        if cut.len() >= 2 {
            for i in 0..cut.len() {
                for j in i + 1..cut.len() {
                    if seen.insert((cut[i], cut[j])) {
                        slice.segments.push((cut[i], cut[j]));
                    }
                }
            }
        }
    }
    Ok(slice)
}

/// Symmetric Hausdorff distance between two point clouds.
pub fn hausdorff_clouds(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let directed = |x: &[[f64; 2]], y: &[[f64; 2]]| {
        x.iter()
            .map(|&p| y.iter().map(|&q| dist2(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
            .sqrt()
    };
    directed(a, b).max(directed(b, a))
}

/// `L_H` between the reconstructed front at `time` and the exact contour
/// sampled with `samples` points per closed curve.
pub fn hausdorff(graph: &FrontGraph, example: Example, time: f64, samples: usize) -> Result<f64, MetricsError> {
    let slice = reconstruct_front(graph, time, 10)?;
    if slice.points.is_empty() {
        return Err(MetricsError::Empty);
    }
    let exact = example.exact_contour(time, samples)?;
    let rec_to_exact = if example.is_signed_distance() {
        slice
            .points
            .iter()
            .map(|p| example.exact_phi(p[0], p[1], time).map(f64::abs))
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))?
    } else {
        let n = exact.len();
        slice
            .points
            .iter()
            .map(|&p| (0..n).map(|k| segment_distance(p, exact[k], exact[(k + 1) % n])).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let exact_to_rec = exact.iter().map(|&q| slice.distance_to(q)).fold(0.0, f64::max);
    Ok(rec_to_exact.max(exact_to_rec))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through `(log h, log e)`.
pub fn fit_order(pairs: &[(f64, f64)]) -> Result<Fit, MetricsError> {
    if pairs.len() < 3 {
        return Err(MetricsError::TooFewPairs {
            needed: 3,
            got: pairs.len(),
        });
    }
    if pairs.iter().any(|&(h, e)| !(h > 0.0 && e > 0.0 && h.is_finite() && e.is_finite())) {
        return Err(MetricsError::NonPositive);
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(Fit {
        slope,
        intercept: my - slope * mx,
    })
}

pub const BIN_WIDTH: f64 = 0.2;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Histogram {
    /// `counts[k]` covers `[k, k + 1) · BIN_WIDTH`.
    pub counts: Vec<usize>,
    pub min: f64,
    pub max: f64,
}

impl Histogram {
    fn from_values(values: &[f64]) -> Histogram {
        let mut counts = Vec::new();
        for &v in values {
            // guard against d/h landing a rounding error below a bin edge
            let k = (v / BIN_WIDTH + 1e-9).floor().max(0.0) as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        Histogram {
            counts,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn bin_lower(k: usize) -> f64 {
        k as f64 * BIN_WIDTH
    }
}

/// Child-to-parent spacetime distances in units of `h`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evenness {
    pub parent_a: Histogram,
    pub parent_b: Histogram,
    pub below_h: usize,
}

pub fn evenness_histogram(graph: &FrontGraph) -> Evenness {
    let mut da = Vec::new();
    let mut db = Vec::new();
    for p in graph.accepted_points() {
        if let Some((a, b)) = p.parents {
            da.push(p.pos.distance(graph.point(a).pos) / graph.h);
            db.push(p.pos.distance(graph.point(b).pos) / graph.h);
        }
    }
    Evenness {
        below_h: da.iter().chain(&db).filter(|&&d| d < 1.0 - 1e-12).count(),
        parent_a: Histogram::from_values(&da),
        parent_b: Histogram::from_values(&db),
    }
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn segment_distance(q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 > 0.0 {
        (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist2(q, [a[0] + s * d[0], a[1] + s * d[1]]).sqrt()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Uniform bucket grid over spacetime points for k-nearest queries.
struct SpatialHash {
    points: Vec<Vec3>,
    cell: f64,
    buckets: BTreeMap<[i64; 3], Vec<usize>>,
}

impl SpatialHash {
    fn new(points: Vec<Vec3>, cell: f64) -> Self {
        let mut buckets: BTreeMap<[i64; 3], Vec<usize>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(*p, cell)).or_default().push(i);
        }
        SpatialHash { points, cell, buckets }
    }

    fn key(p: Vec3, cell: f64) -> [i64; 3] {
        [(p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64]
    }

    /// Up to `k` nearest other points, nearest first.
    fn nearest(&self, i: usize, k: usize) -> Vec<usize> {
        let p = self.points[i];
        let c = Self::key(p, self.cell);
        let mut found: Vec<(f64, usize)> = Vec::new();
        let mut ring = 1i64;
        loop {
            found.clear();
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        for &j in self.buckets.get(&[c[0] + dx, c[1] + dy, c[2] + dz]).into_iter().flatten() {
                            if j != i {
                                found.push((p.distance(self.points[j]), j));
                            }
                        }
                    }
                }
            }
            found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            // results are exact once the k-th distance lies inside the scanned cube
            let covered = ring as f64 * self.cell;
            let enough = found.len() >= k && found[k - 1].0 <= covered;
            if enough || found.len() + 1 >= self.points.len() || ring > 64 {
                found.truncate(k);
                return found.into_iter().map(|(_, j)| j).collect();
            }
            ring += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::march::{march, MarchConfig, SpacetimePoint};
    use proptest::prelude::*;

    #[test]
    fn point_errors() {
        assert_eq!(point_error(Vec3::new(0.55, 0.0, 0.3), Example::Expanding).unwrap(), 0.0);
        let e = point_error(Vec3::new(0.5 + 0.01, 0.0, 0.25), Example::Expanding).unwrap();
        assert!((e - 0.01).abs() < 1e-15);
        // the rose residual is not a distance: a point radially off by d has error d
        // but a point off along the front does not keep the error constant
        let e = point_error(Vec3::new(0.0, 0.3, 0.1), Example::Rose).unwrap();
        assert!((e - (0.3 - (0.1 * (1.5 * std::f64::consts::PI).cos() + 0.25))).abs() < 1e-15);
        assert!(point_error(Vec3::new(0.0, 0.0, 0.6), Example::TwoCircles).is_err());
    }

    #[test]
    fn norm_values() {
        let n = norms(&[2.0], 0.1).unwrap();
        assert!((n.l1 - 0.02).abs() < 1e-15);
        assert!((n.l2 - 0.2).abs() < 1e-15);
        assert_eq!(n.linf, 2.0);
        let n = norms(&[1.0, 1.0], 1.0).unwrap();
        assert_eq!((n.l1, n.l2, n.linf), (2.0, 2f64.sqrt(), 1.0));
        assert!(matches!(norms(&[], 1.0), Err(MetricsError::Empty)));
    }

    proptest! {
        #[test]
        fn norms_are_homogeneous(errors in prop::collection::vec(0.0f64..1.0, 1..40), c in 0.0f64..10.0, h in 1e-3f64..1.0) {
            let a = norms(&errors, h).unwrap();
            let scaled: Vec<f64> = errors.iter().map(|e| c * e).collect();
            let b = norms(&scaled, h).unwrap();
            prop_assert!((b.l1 - c * a.l1).abs() <= 1e-12 * (1.0 + b.l1));
            prop_assert!((b.l2 - c * a.l2).abs() <= 1e-12 * (1.0 + b.l2));
            prop_assert!((b.linf - c * a.linf).abs() <= 1e-12 * (1.0 + b.linf));
            prop_assert!(a.linf >= a.l2 / (h * h * errors.len() as f64).sqrt() - 1e-12);
        }

        #[test]
        fn norms_are_monotone(pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..40)) {
            let lo: Vec<f64> = pairs.iter().map(|p| p.0.min(p.1)).collect();
            let hi: Vec<f64> = pairs.iter().map(|p| p.0.max(p.1)).collect();
            let (a, b) = (norms(&lo, 0.1).unwrap(), norms(&hi, 0.1).unwrap());
            prop_assert!(a.l1 <= b.l1 && a.l2 <= b.l2 && a.linf <= b.linf);
        }

        #[test]
        fn hausdorff_is_symmetric(a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30),
                                  b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30)) {
            let a: Vec<[f64; 2]> = a.into_iter().map(|p| [p.0, p.1]).collect();
            let b: Vec<[f64; 2]> = b.into_iter().map(|p| [p.0, p.1]).collect();
            let d = hausdorff_clouds(&a, &b);
            prop_assert!(d >= 0.0);
            prop_assert_eq!(d, hausdorff_clouds(&b, &a));
            prop_assert_eq!(hausdorff_clouds(&a, &a), 0.0);
        }
    }

    #[test]
    fn hausdorff_of_shifted_circle() {
        let circle: Vec<[f64; 2]> = (0..400)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 400.0;
                [0.3 * t.cos(), 0.3 * t.sin()]
            })
            .collect();
        assert_eq!(hausdorff_clouds(&circle, &circle), 0.0);
        let d = 1e-3;
        let moved: Vec<[f64; 2]> = circle.iter().map(|p| [p[0] + d, p[1]]).collect();
        assert!((hausdorff_clouds(&circle, &moved) - d).abs() < 1e-12);
    }

    #[test]
    fn fits() {
        let hs = [0.1, 0.05, 0.025, 0.0125];
        let lin: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 3.0 * h)).collect();
        assert!((fit_order(&lin).unwrap().slope - 1.0).abs() < 1e-12);
        assert!((fit_order(&lin).unwrap().intercept - 3f64.ln()).abs() < 1e-12);
        let quad: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 0.5 * h * h)).collect();
        assert!((fit_order(&quad).unwrap().slope - 2.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 0.7)).collect();
        assert!(fit_order(&flat).unwrap().slope.abs() < 1e-12);
        assert!(matches!(fit_order(&lin[..2]), Err(MetricsError::TooFewPairs { got: 2, .. })));
        assert!(matches!(fit_order(&[(0.1, 0.0), (0.2, 1.0), (0.3, 1.0)]), Err(MetricsError::NonPositive)));
    }

    fn synthetic_graph(h: f64) -> FrontGraph {
        let mut points = Vec::new();
        let n = Vec3::new(0.0, 0.0, -1.0);
        for k in 0..4 {
            let pos = Vec3::new(k as f64 * h, 0.0, 0.0);
            points.push(SpacetimePoint { id: PointId(k), pos, normal: n, parents: None });
        }
        for k in 0..3 {
            let x = (k as f64 + 0.5) * h;
            let pos = Vec3::new(x, 0.0, (h * h - 0.25 * h * h).sqrt());
            let id = PointId(points.len());
            points.push(SpacetimePoint { id, pos, normal: n, parents: Some((PointId(k), PointId(k + 1))) });
        }
        FrontGraph {
            accepted: points.iter().map(|p| p.id).collect(),
            points,
            h,
            m: 4,
            final_time: 1.0,
            snapshots: Vec::new(),
            stats: Default::default(),
        }
    }

    #[test]
    fn evenness_of_exact_spacing() {
        let e = evenness_histogram(&synthetic_graph(0.1));
        assert_eq!(e.below_h, 0);
        for hist in [&e.parent_a, &e.parent_b] {
            assert_eq!(hist.total(), 3);
            assert_eq!(hist.counts.iter().position(|&c| c > 0), Some(5));
            assert_eq!(hist.counts[5], 3);
        }
    }

    fn cone_graph(m: usize) -> FrontGraph {
        // exact samples of the expanding cone on concentric rings
        let h = 0.25 * (std::f64::consts::PI / m as f64).sin();
        let mut points = Vec::new();
        let rows = (0.5 / h).ceil() as usize;
        for r in 0..=rows {
            let t = r as f64 * h;
            let shift = if r % 2 == 0 { 0.0 } else { 0.5 };
            let count = (m as f64 * (0.25 + t) / 0.25).round() as usize;
            for k in 0..count {
                let th = std::f64::consts::TAU * (k as f64 + shift) / count as f64;
                let rad = 0.25 + t;
                let pos = Vec3::new(rad * th.cos(), rad * th.sin(), t);
                let normal = crate::frames::manifold_normal([th.cos(), th.sin()], 1.0);
                points.push(SpacetimePoint { id: PointId(points.len()), pos, normal, parents: None });
            }
        }
        FrontGraph {
            accepted: points.iter().map(|p| p.id).collect(),
            points,
            h,
            m,
            final_time: 0.5,
            snapshots: Vec::new(),
            stats: Default::default(),
        }
    }

    #[test]
    fn reconstruction_of_exact_cone() {
        for m in [25, 50, 100] {
            let g = cone_graph(m);
            let slice = reconstruct_front(&g, 0.3 + 0.37 * g.h, 10).unwrap();
            assert_eq!(slice.components(2.0 * g.h), 1);
            let r = 0.55 + 0.37 * g.h;
            let err = slice.points.iter().map(|p| (p[0].hypot(p[1]) - r).abs()).fold(0.0, f64::max);
            assert!(err < 2.0 * g.h * g.h, "{err}");
            let lh = hausdorff(&g, Example::Expanding, 0.3 + 0.37 * g.h, 20 * m).unwrap();
            assert!(lh < 2.0 * g.h * g.h, "{lh}");
        }
        assert!(matches!(reconstruct_front(&cone_graph(25), 0.9, 10), Err(MetricsError::OutsideCoverage { .. })));
    }

    #[test]
    fn slice_at_zero_recovers_seeds() {
        let front = Example::Expanding.sample_initial_front(30).unwrap();
        let g = march(&front, &Example::Expanding, MarchConfig::new(0.2)).unwrap();
        let slice = reconstruct_front(&g, 0.0, 10).unwrap();
        for (p, _) in &front.points {
            assert!(slice.points.iter().any(|q| q[0] == p.x && q[1] == p.y));
        }
        for q in &slice.points {
            let r = q[0].hypot(q[1]);
            assert!(r <= 0.25 + 1e-12 && r >= 0.25 * (std::f64::consts::PI / 30.0).cos() - 1e-12);
        }
    }

    #[test]
    fn two_circles_merge() {
        let front = Example::TwoCircles.sample_initial_front(40).unwrap();
        let g = march(&front, &Example::TwoCircles, MarchConfig::new(0.35)).unwrap();
        assert_eq!(reconstruct_front(&g, 0.1, 10).unwrap().components(2.0 * g.h), 2);
        assert_eq!(reconstruct_front(&g, 0.3, 10).unwrap().components(2.0 * g.h), 1);
    }
}
