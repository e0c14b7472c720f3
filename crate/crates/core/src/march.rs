//! The marching loop: extract the earliest band point, accept it, grow one
//! child from it and a neighbouring accepted point, and keep the band's
//! segment list consistent.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::band::NarrowBand;
use crate::book::Book;
use crate::error::{BookError, MarchError};
use crate::frames::{Frame, Vec3};
use crate::local_solver::{iterative_solve, IterativeConfig, LocalStencil};
use crate::sampler::{check_e, check_v2, grid_search, PlacementProblem};
use crate::speed::{FrontSample, SpeedField};
use crate::PointId;

/// Sampled point of `M` with its outward unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePoint {
    pub id: PointId,
    /// `(x, y, t)`.
    pub pos: Vec3,
    pub normal: Vec3,
    /// `(p_a, p_b)`; `None` for seeds.
    pub parents: Option<(PointId, PointId)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarchConfig {
    pub final_time: f64,
    /// Size of the local accepted subset.
    pub neighbours: usize,
    /// Grid nodes per side in the placement search.
    pub grid_size: usize,
    pub grid_rounds: usize,
    /// Refine the direct height with the pseudo-time iteration.
    pub iterative: bool,
    /// Brute-force invariant scans after every iteration.
    pub verify_invariants: bool,
    /// Number of band snapshots recorded over `[0, final_time]`.
    pub snapshots: usize,
}

impl MarchConfig {
    pub fn new(final_time: f64) -> Self {
        MarchConfig {
            final_time,
            neighbours: 10,
            grid_size: 10,
            grid_rounds: 5,
            iterative: true,
            verify_invariants: false,
            snapshots: 10,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MarchStats {
    pub iterations: usize,
    pub children: usize,
    /// Accepted band points that produced no child before the final time.
    pub childless: usize,
    /// Placement attempts that failed and moved on to the next `p_b`.
    pub retries: usize,
    /// Points removed from the band by the segment-list constraints.
    pub pruned: usize,
    pub max_band: usize,
    pub max_solver_iterations: usize,
    pub solver_iterations: usize,
    /// Children whose refined height broke a constraint; the direct height was kept.
    pub iterative_fallbacks: usize,
    pub grid_evaluations: usize,
    /// Grid nodes that satisfied (V1) and (V2) but not (E).
    pub v2_without_e: usize,
    /// Accepted points examined while collecting neighbours.
    pub neighbour_scans: usize,
    /// Frames built from the mean normal because `p_a`'s normal opposed a neighbour's.
    pub averaged_frames: usize,
    /// Neighbours dropped because no common frame direction existed.
    pub frame_prunes: usize,
    pub no_frame: usize,
}

/// Band segments at one instant, for output.
#[derive(Clone, Debug, PartialEq)]
pub struct BookSnapshot {
    pub time: f64,
    pub segments: Vec<(PointId, PointId)>,
}

/// Accepted points in acceptance order, with child→parent edges.
#[derive(Clone, Debug)]
pub struct FrontGraph {
    /// Every point ever created, indexed by id.
    pub points: Vec<SpacetimePoint>,
    pub accepted: Vec<PointId>,
    pub h: f64,
    pub m: usize,
    pub final_time: f64,
    pub snapshots: Vec<BookSnapshot>,
    pub stats: MarchStats,
}

impl FrontGraph {
    pub fn point(&self, id: PointId) -> &SpacetimePoint {
        &self.points[id.0]
    }

    pub fn accepted_points(&self) -> impl Iterator<Item = &SpacetimePoint> + '_ {
        self.accepted.iter().map(move |&id| &self.points[id.0])
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    pub fn max_time(&self) -> f64 {
        self.accepted_points().map(|p| p.pos.z).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Neighbourhood of an accepted point in its local frame.
#[derive(Clone, Debug)]
pub struct LocalRepresentation {
    pub frame: Frame,
    /// Global position of `p_a`; frame coordinates are taken relative to it.
    pub origin: Vec3,
    /// Members of `Ã` sorted by distance to `p_a` (first is `p_a`).
    pub members: Vec<PointId>,
    /// Frame coordinates of `members`.
    pub local: Vec<Vec3>,
    /// Indices into `members` of admissible `p_b`, nearest first.
    pub candidates: Vec<usize>,
}

pub struct MarchState {
    points: Vec<SpacetimePoint>,
    accepted: Vec<PointId>,
    band: NarrowBand,
    book: Book,
    h: f64,
    m: usize,
    config: MarchConfig,
    stats: MarchStats,
    max_speed: f64,
    counter: usize,
    snapshots: Vec<BookSnapshot>,
    next_snapshot: usize,
}

impl MarchState {
    pub fn initialize(front: &FrontSample, config: MarchConfig) -> Result<MarchState, MarchError> {
        let m = front.points.len();
        if m < 3 {
            return Err(MarchError::TooFewSamples(m));
        }
        if !(config.final_time > 0.0) {
            return Err(MarchError::BadFinalTime(config.final_time));
        }
        let mut min_dist = f64::INFINITY;
        for i in 0..m {
            let (p, n) = front.points[i];
            if (n.norm() - 1.0).abs() > 1e-10 || !p.is_finite() {
                return Err(MarchError::BadNormal(i));
            }
            for j in i + 1..m {
                let d = p.distance(front.points[j].0);
                if d == 0.0 {
                    return Err(MarchError::DuplicateSamples(i, j));
                }
                min_dist = min_dist.min(d);
            }
        }
        let points: Vec<SpacetimePoint> = front
            .points
            .iter()
            .enumerate()
            .map(|(i, &(pos, normal))| SpacetimePoint {
                id: PointId(i),
                pos,
                normal,
                parents: None,
            })
            .collect();
        let mut band = NarrowBand::new();
        for p in &points {
            band.push(p.id, p.pos.z);
        }
        let cycles: Vec<Vec<PointId>> = front.cycles.iter().map(|c| c.iter().map(|&i| PointId(i)).collect()).collect();
        let book = Book::from_cycles(&cycles);
        let mut state = MarchState {
            accepted: points.iter().map(|p| p.id).collect(),
            points,
            band,
            book,
            h: min_dist / 2.0,
            m,
            config,
            stats: MarchStats::default(),
            max_speed: 0.0,
            counter: 0,
            snapshots: Vec::new(),
            next_snapshot: 0,
        };
        state.stats.max_band = m;
        state.record_snapshot(0.0);
        Ok(state)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn band(&self) -> &NarrowBand {
        &self.band
    }

    pub fn book(&self) -> &Book {
        &self.book
    }

    pub fn accepted(&self) -> &[PointId] {
        &self.accepted
    }

    pub fn point(&self, id: PointId) -> &SpacetimePoint {
        &self.points[id.0]
    }

    pub fn stats(&self) -> &MarchStats {
        &self.stats
    }

    fn xy(&self) -> impl Fn(PointId) -> [f64; 2] + '_ {
        xy_of(&self.points)
    }

    fn record_snapshot(&mut self, time: f64) {
        let n = self.config.snapshots;
        let final_time = self.config.final_time;
        let target = move |k: usize| final_time * k as f64 / n.max(1) as f64;
        if n == 0 || self.next_snapshot > n || time < target(self.next_snapshot) {
            return;
        }
        while self.next_snapshot <= n && time >= target(self.next_snapshot) {
            self.next_snapshot += 1;
        }
        self.snapshots.push(BookSnapshot {
            time,
            segments: self.book.segments(),
        });
    }

    /// `Ã`, the frame at `p_a` and the admissible `p_b` candidates.
    pub fn local_representation(&mut self, a: PointId) -> Option<LocalRepresentation> {
        let pa = self.points[a.0];
        let window = pa.pos.z - 10.0 * self.h * (self.max_speed * self.max_speed + 1.0).sqrt();
        let mut near: Vec<(f64, PointId)> = Vec::new();
        for &id in self.accepted.iter().rev() {
            let p = &self.points[id.0];
            if p.pos.z < window {
                break;
            }
            self.stats.neighbour_scans += 1;
            near.push((pa.pos.distance(p.pos), id));
        }
        if !near.iter().any(|&(_, id)| id == a) {
            near.push((0.0, a));
        }
        near.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1 != a).cmp(&(y.1 != a))).then(x.1.cmp(&y.1)));
        near.truncate(self.config.neighbours.max(2));

        let nu_bar = loop {
            let normals: Vec<Vec3> = near.iter().map(|&(_, id)| self.points[id.0].normal).collect();
            if let Some(nu) = common_direction(&normals) {
                break nu;
            }
            if near.len() <= 2 {
                self.stats.no_frame += 1;
                return None;
            }
            near.pop();
            self.stats.frame_prunes += 1;
        };
        if nu_bar != pa.normal {
            self.stats.averaged_frames += 1;
        }

        let frame = Frame::from_normal(nu_bar).ok()?;
        let members: Vec<PointId> = near.iter().map(|&(_, id)| id).collect();
        let local: Vec<Vec3> = members.iter().map(|id| frame.to_local(self.points[id.0].pos - pa.pos)).collect();
        let candidates = (0..members.len())
            .filter(|&k| members[k] != a && local[k].x > self.h / 2.0)
            .collect();
        Some(LocalRepresentation {
            frame,
            origin: pa.pos,
            members,
            local,
            candidates,
        })
    }

    /// Places a child of `p_a` and `p_b = members[b]`; `None` if infeasible.
    pub fn compute_new_point<S>(&mut self, rep: &LocalRepresentation, b: usize, field: &S) -> Option<(Vec3, Vec3)>
    where
        S: SpeedField + ?Sized,
    {
        let a = rep.members[0];
        let pa = self.points[a.0];
        let g0 = field.speed(pa.pos);
        if !g0.is_finite() {
            return None;
        }
        let neighbours: Vec<Vec3> = rep.members.iter().map(|id| self.points[id.0].pos).collect();
        let mut prob = PlacementProblem::new(rep.frame, rep.origin, rep.local[0], rep.local[b], g0, self.h, neighbours);
        prob.grid_size = self.config.grid_size;
        prob.max_rounds = self.config.grid_rounds;
        let placement = match grid_search(&prob) {
            Ok(p) => p,
            Err(stats) => {
                self.stats.grid_evaluations += stats.evaluations;
                self.stats.v2_without_e += stats.v2_without_e;
                return None;
            }
        };
        self.stats.grid_evaluations += placement.evaluations;
        self.stats.v2_without_e += placement.v2_without_e;

        let st = LocalStencil::new(rep.local[0], rep.local[b], placement.uv).ok()?;
        let mut w = placement.w;
        if self.config.iterative {
            let frame = rep.frame;
            let origin = rep.origin;
            let uv = placement.uv;
            let speed_at = |w: f64| field.speed(origin + frame.to_global(Vec3::new(uv[0], uv[1], w)));
            let cfg = IterativeConfig::for_spacing(self.h);
            let sol = iterative_solve(&st, frame.r_hat(), speed_at, w, &cfg).ok()?;
            self.stats.solver_iterations += sol.iterations;
            self.stats.max_solver_iterations = self.stats.max_solver_iterations.max(sol.iterations);
            let p = prob.to_global(Vec3::new(uv[0], uv[1], sol.w));
            let (ta, ti) = prob.parent_times();
            if check_v2(p.z, ta, ti, prob.dt) && check_e(p, &prob.neighbours, self.h) {
                w = sol.w;
            } else {
                self.stats.iterative_fallbacks += 1;
            }
        }
        let pos = prob.to_global(Vec3::new(placement.uv[0], placement.uv[1], w));
        let normal = rep.frame.to_global(st.child_normal(w));
        Some((pos, normal))
    }

    fn add_point(&mut self, pos: Vec3, normal: Vec3, parents: (PointId, PointId)) -> PointId {
        let id = PointId(self.points.len());
        self.points.push(SpacetimePoint {
            id,
            pos,
            normal,
            parents: Some(parents),
        });
        id
    }

    /// One pass of the main loop. Returns `false` once the band is empty.
    pub fn step<S>(&mut self, field: &S) -> Result<bool, MarchError>
    where
        S: SpeedField + ?Sized,
    {
        let Some((a, ta)) = self.band.pop_min() else {
            return Ok(false);
        };
        self.counter += 1;
        self.stats.iterations += 1;
        if self.counter > self.m {
            self.accepted.push(a);
        }
        self.max_speed = self.max_speed.max(field.speed(self.points[a.0].pos).abs());

        let mut child = None;
        if ta < self.config.final_time {
            if let Some(rep) = self.local_representation(a) {
                for (attempt, &b) in rep.candidates.iter().enumerate().take(self.config.neighbours) {
                    if attempt > 0 {
                        self.stats.retries += 1;
                    }
                    if let Some((pos, normal)) = self.compute_new_point(&rep, b, field) {
                        child = Some((pos, normal, rep.members[b]));
                        break;
                    }
                }
            }
            if child.is_none() {
                self.stats.childless += 1;
            }
        }

        match child {
            Some((pos, normal, b)) => {
                let d = self.add_point(pos, normal, (a, b));
                self.band.push(d, pos.z);
                self.stats.children += 1;
                if self.book.contains(a) {
                    self.book.replace_node(a, d)?;
                } else {
                    self.book.add_node(d);
                }
            }
            None => {
                if self.book.contains(a) {
                    self.book.drop_node(a, &xy_of(&self.points))?;
                }
            }
        }
        self.keep_book()?;
        self.stats.max_band = self.stats.max_band.max(self.band.len());
        self.record_snapshot(ta);
        if self.config.verify_invariants {
            self.verify(ta)?;
        }
        Ok(true)
    }

    fn keep_book(&mut self) -> Result<(), BookError> {
        let result = self.book.clean(&xy_of(&self.points));
        for id in self.book.take_removed() {
            if self.band.remove(id) {
                self.stats.pruned += 1;
            }
        }
        result
    }

    /// Brute-force check of the band, ordering, spacing and book invariants.
    pub fn verify(&self, last_time: f64) -> Result<(), MarchError> {
        let fail = |message: String| MarchError::Invariant {
            iteration: self.stats.iterations,
            message,
        };
        if self.band.len() > self.m {
            return Err(fail(format!("band holds {} > m = {} points", self.band.len(), self.m)));
        }
        if let Some((_, t)) = self.band.peek_min() {
            if t < last_time {
                return Err(fail(format!("band minimum {t} precedes accepted time {last_time}")));
            }
        }
        let times: Vec<f64> = self.accepted.iter().map(|id| self.points[id.0].pos.z).collect();
        if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
            return Err(fail(format!("acceptance times decrease: {} then {}", w[0], w[1])));
        }
        if let Some(&last) = self.points.last() {
            if let Some((pa, pb)) = last.parents {
                for parent in [pa, pb] {
                    let d = last.pos.distance(self.points[parent.0].pos);
                    if d < self.h - 1e-12 {
                        return Err(fail(format!("child {} is {d:e} from parent {}", last.id, parent)));
                    }
                }
            }
        }
        let v = self.book.violations(&self.xy());
        if !v.is_clean() {
            return Err(fail(format!("book violations {v:?}")));
        }
        let band: BTreeSet<PointId> = self.band.ids().collect();
        let nodes: BTreeSet<PointId> = self.book.nodes().collect();
        if band != nodes {
            return Err(fail("band and book disagree".to_string()));
        }
        Ok(())
    }

    /// Runs until the band is empty.
    pub fn run<S>(mut self, field: &S) -> Result<FrontGraph, MarchError>
    where
        S: SpeedField + ?Sized,
    {
        while self.step(field)? {}
        if self.config.snapshots > 0 {
            let time = self.accepted.last().map_or(0.0, |id| self.points[id.0].pos.z);
            self.snapshots.push(BookSnapshot {
                time,
                segments: self.book.segments(),
            });
        }
        Ok(FrontGraph {
            points: self.points,
            accepted: self.accepted,
            h: self.h,
            m: self.m,
            final_time: self.config.final_time,
            snapshots: self.snapshots,
            stats: self.stats,
        })
    }
}

/// A direction with positive dot product against every normal: the first
/// normal if it qualifies, otherwise their normalized mean.
fn common_direction(normals: &[Vec3]) -> Option<Vec3> {
    let first = *normals.first()?;
    if normals.iter().all(|n| n.dot(first) > 0.0) {
        return Some(first);
    }
    let sum = normals.iter().fold(Vec3::new(0.0, 0.0, 0.0), |acc, &n| acc + n);
    let mean = sum.normalized();
    (mean.is_finite() && normals.iter().all(|n| n.dot(mean) > 0.0)).then_some(mean)
}

fn xy_of(points: &[SpacetimePoint]) -> impl Fn(PointId) -> [f64; 2] + '_ {
    move |id: PointId| {
        let p = points[id.0].pos;
        [p.x, p.y]
    }
}

/// Initializes from `front` and runs to completion.
pub fn march<S>(front: &FrontSample, field: &S, config: MarchConfig) -> Result<FrontGraph, MarchError>
where
    S: SpeedField + ?Sized,
{
    MarchState::initialize(front, config)?.run(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speed::Example;

    fn square_front() -> FrontSample {
        let n = |x: f64, y: f64| Vec3::new(x, y, -1.0) / 2f64.sqrt();
        FrontSample {
            points: vec![
                (Vec3::new(0.0, 0.0, 0.0), n(-1.0, 0.0)),
                (Vec3::new(1.0, 0.0, 0.0), n(0.0, -1.0)),
                (Vec3::new(1.0, 1.0, 0.0), n(1.0, 0.0)),
                (Vec3::new(0.0, 1.0, 0.0), n(0.0, 1.0)),
            ],
            cycles: vec![vec![0, 1, 2, 3]],
        }
    }

    #[test]
    fn initialization() {
        let s = MarchState::initialize(&square_front(), MarchConfig::new(1.0)).unwrap();
        assert_eq!(s.h(), 0.5);
        assert_eq!(s.band().len(), 4);
        assert_eq!(s.accepted().len(), 4);

        for m in [10, 25, 64] {
            let front = Example::Expanding.sample_initial_front(m).unwrap();
            let s = MarchState::initialize(&front, MarchConfig::new(0.5)).unwrap();
            let expected = 0.25 * (std::f64::consts::PI / m as f64).sin();
            assert!((s.h() - expected).abs() < 1e-15);
        }

        let front = Example::TwoCircles.sample_initial_front(20).unwrap();
        let s = MarchState::initialize(&front, MarchConfig::new(0.5)).unwrap();
        assert_eq!(s.book().components().len(), 2);

        let mut dup = square_front();
        dup.points[2].0 = dup.points[1].0;
        assert!(matches!(MarchState::initialize(&dup, MarchConfig::new(1.0)), Err(MarchError::DuplicateSamples(1, 2))));
        let mut small = square_front();
        small.points.truncate(2);
        assert!(matches!(MarchState::initialize(&small, MarchConfig::new(1.0)), Err(MarchError::TooFewSamples(2))));
    }

    #[test]
    fn local_representation_prunes_opposed_normals() {
        let front = Example::Expanding.sample_initial_front(40).unwrap();
        let mut s = MarchState::initialize(&front, MarchConfig::new(0.5)).unwrap();
        let rep = s.local_representation(PointId(0)).unwrap();
        assert_eq!(rep.members[0], PointId(0));
        assert_eq!(rep.members.len(), 10);
        assert!(!rep.candidates.is_empty());
        let full = rep.members.len();

        // flip the normal of the farthest member
        let far = *rep.members.last().unwrap();
        s.points[far.0].normal = -s.points[far.0].normal;
        let rep = s.local_representation(PointId(0)).unwrap();
        assert_eq!(rep.members.len(), full - 1);
        assert!(!rep.members.contains(&far));
    }

    #[test]
    fn no_candidate_when_neighbours_lie_behind() {
        let front = Example::Expanding.sample_initial_front(40).unwrap();
        let mut s = MarchState::initialize(&front, MarchConfig::new(0.5)).unwrap();
        s.h = 10.0;
        let rep = s.local_representation(PointId(0)).unwrap();
        assert!(rep.candidates.is_empty());
    }

    #[test]
    fn expanding_circle_run() {
        let front = Example::Expanding.sample_initial_front(25).unwrap();
        let mut cfg = MarchConfig::new(0.5);
        cfg.verify_invariants = true;
        let g = march(&front, &Example::Expanding, cfg).unwrap();
        assert!(g.max_time() <= 0.5 + g.h + 1e-12);
        assert!(g.stats.max_band <= 25);
        assert!(g.len() > 25 * 5);
        let max_err = g
            .accepted_points()
            .map(|p| Example::Expanding.exact_phi(p.pos.x, p.pos.y, p.pos.z).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(max_err < 0.05, "{max_err}");
    }

    #[test]
    fn runs_are_deterministic() {
        let front = Example::Rose.sample_initial_front(30).unwrap();
        let a = march(&front, &Example::Rose, MarchConfig::new(0.1)).unwrap();
        let b = march(&front, &Example::Rose, MarchConfig::new(0.1)).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.accepted, b.accepted);
    }
}
