//! Segment list over the narrow band and the planar constraints that keep it a
//! disjoint union of simple, non-crossing, spike-free cycles.
//!
//! All geometric tests use the `xy` projection of the band points. Positions are
//! supplied by the caller as a lookup `PointId -> [x, y]`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::error::BookError;
use crate::PointId;

/// Smallest admissible angle between two segments sharing a node.
pub const SPIKE_ANGLE: f64 = 0.2 * PI;
/// Relative tolerance of the orientation predicate.
pub const COLLINEAR_TOLERANCE: f64 = 1e-14;
const MAX_CLEAN_PASSES: usize = 100_000;

type Xy = [f64; 2];

fn sub(a: Xy, b: Xy) -> Xy {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Xy) -> f64 {
    a[0].hypot(a[1])
}

fn xy_distance(a: Xy, b: Xy) -> f64 {
    norm(sub(a, b))
}

/// Sign of the turn `a → b → c`: `1`, `-1`, or `0` within tolerance.
pub fn orientation(a: Xy, b: Xy, c: Xy) -> i8 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let cross = ab[0] * ac[1] - ab[1] * ac[0];
    let tol = COLLINEAR_TOLERANCE * norm(ab) * norm(ac);
    if cross > tol {
        1
    } else if cross < -tol {
        -1
    } else {
        0
    }
}

fn within_box(a: Xy, b: Xy, p: Xy) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed segments `p1p2` and `p3p4` share at least one point.
pub fn segments_intersect(p1: Xy, p2: Xy, p3: Xy, p4: Xy) -> bool {
    let o1 = orientation(p1, p2, p3);
    let o2 = orientation(p1, p2, p4);
    let o3 = orientation(p3, p4, p1);
    let o4 = orientation(p3, p4, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(p1, p2, p3))
        || (o2 == 0 && within_box(p1, p2, p4))
        || (o3 == 0 && within_box(p3, p4, p1))
        || (o4 == 0 && within_box(p3, p4, p2))
}

/// Angle at `apex` between the directions to `a` and `b`; `None` if degenerate.
pub fn apex_angle(apex: Xy, a: Xy, b: Xy) -> Option<f64> {
    let da = sub(a, apex);
    let db = sub(b, apex);
    let (la, lb) = (norm(da), norm(db));
    if la == 0.0 || lb == 0.0 {
        return None;
    }
    let cross = da[0] * db[1] - da[1] * db[0];
    let dot = da[0] * db[0] + da[1] * db[1];
    Some(cross.abs().atan2(dot))
}

/// Unordered segment key `(min, max)`.
pub fn segment_key(a: PointId, b: PointId) -> (PointId, PointId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Counts of each violation class found by a brute-force scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Violations {
    pub wrong_degree: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub intersections: usize,
    pub spikes: usize,
}

impl Violations {
    pub fn is_clean(&self) -> bool {
        *self == Violations::default()
    }
}

/// Undirected multigraph over band points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Book {
    adj: BTreeMap<PointId, Vec<PointId>>,
    dirty: BTreeSet<PointId>,
    removed: Vec<PointId>,
}

impl Book {
    pub fn new() -> Self {
        Self::default()
    }

    /// Closed polygons, one per cycle; each cycle needs at least 3 nodes.
    pub fn from_cycles(cycles: &[Vec<PointId>]) -> Self {
        let mut book = Book::new();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                book.add_segment(a, cycle[(k + 1) % cycle.len()]);
            }
        }
        book.dirty.clear();
        book
    }

    pub fn add_node(&mut self, id: PointId) {
        self.adj.entry(id).or_default();
    }

    pub fn add_segment(&mut self, a: PointId, b: PointId) {
        self.adj.entry(a).or_default().push(b);
        self.adj.entry(b).or_default().push(a);
        self.dirty.insert(a);
        self.dirty.insert(b);
    }

    /// Removes one copy of the segment; returns whether it existed.
    pub fn remove_segment(&mut self, a: PointId, b: PointId) -> bool {
        let Some(list) = self.adj.get_mut(&a) else {
            return false;
        };
        let Some(k) = list.iter().position(|&x| x == b) else {
            return false;
        };
        list.remove(k);
        let list = self.adj.get_mut(&b).expect("adjacency is symmetric");
        let k = list.iter().position(|&x| x == a).expect("adjacency is symmetric");
        list.remove(k);
        self.dirty.insert(a);
        self.dirty.insert(b);
        true
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.adj.contains_key(&id)
    }

    pub fn degree(&self, id: PointId) -> usize {
        self.adj.get(&id).map_or(0, Vec::len)
    }

    pub fn neighbours(&self, id: PointId) -> &[PointId] {
        self.adj.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn nodes(&self) -> impl Iterator<Item = PointId> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// All segments with multiplicity, as sorted `(min, max)` keys.
    pub fn segments(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for (&a, list) in &self.adj {
            let mut self_refs = 0;
            for &b in list {
                if a < b {
                    out.push((a, b));
                } else if a == b {
                    self_refs += 1;
                }
            }
            for _ in 0..self_refs / 2 {
                out.push((a, a));
            }
        }
        out.sort();
        out
    }

    pub fn segment_count(&self) -> usize {
        self.adj.values().map(Vec::len).sum::<usize>() / 2
    }

    /// Points removed from the band since the last call.
    pub fn take_removed(&mut self) -> Vec<PointId> {
        std::mem::take(&mut self.removed)
    }

    pub fn clear_dirty(&mut self) {
        self.dirty.clear();
    }

    pub fn mark_all_dirty(&mut self) {
        self.dirty = self.adj.keys().copied().collect();
    }

    fn remove_node(&mut self, id: PointId) {
        if let Some(list) = self.adj.remove(&id) {
            for b in list {
                if b != id {
                    if let Some(other) = self.adj.get_mut(&b) {
                        if let Some(k) = other.iter().position(|&x| x == id) {
                            other.remove(k);
                        }
                    }
                    self.dirty.insert(b);
                }
            }
            self.dirty.remove(&id);
            self.removed.push(id);
        }
    }

    /// Relabels `old` as `new` in both of its segments.
    pub fn replace_node(&mut self, old: PointId, new: PointId) -> Result<(), BookError> {
        let degree = match self.adj.get(&old) {
            None => return Err(BookError::MissingNode(old)),
            Some(list) => list.len(),
        };
        if degree != 2 {
            return Err(BookError::WrongDegree { id: old, degree });
        }
        let list = self.adj.remove(&old).expect("checked above");
        for &b in &list {
            if b == old {
                continue;
            }
            let other = self.adj.get_mut(&b).expect("adjacency is symmetric");
            for x in other.iter_mut().filter(|x| **x == old) {
                *x = new;
            }
            self.dirty.insert(b);
        }
        let relabelled = list.into_iter().map(|b| if b == old { new } else { b }).collect();
        self.adj.insert(new, relabelled);
        self.dirty.remove(&old);
        self.dirty.insert(new);
        Ok(())
    }

    /// Removes `id` with its segments and stitches the resulting hanging nodes.
    pub fn drop_node<P>(&mut self, id: PointId, pos: &P) -> Result<(), BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        if !self.contains(id) {
            return Err(BookError::MissingNode(id));
        }
        self.remove_node(id);
        self.stitch_hanging_nodes(pos)
    }

    /// Nodes that appear in exactly one segment.
    pub fn hanging_nodes(&self) -> Vec<PointId> {
        self.adj.iter().filter(|(_, l)| l.len() == 1).map(|(&id, _)| id).collect()
    }

    /// Joins the `xy`-closest pair of hanging nodes until none remain.
    pub fn stitch_hanging_nodes<P>(&mut self, pos: &P) -> Result<(), BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        let mut hanging = self.hanging_nodes();
        if hanging.len() % 2 == 1 {
            return Err(BookError::OddHangingCount(hanging.len()));
        }
        let xy: Vec<Xy> = hanging.iter().map(|&id| pos(id)).collect();
        let mut alive = vec![true; hanging.len()];
        for _ in 0..hanging.len() / 2 {
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..hanging.len() {
                if !alive[i] {
                    continue;
                }
                for j in i + 1..hanging.len() {
                    if !alive[j] {
                        continue;
                    }
                    let d = xy_distance(xy[i], xy[j]);
                    if best.is_none_or(|b| d < b.0) {
                        best = Some((d, i, j));
                    }
                }
            }
            let (_, i, j) = best.expect("an even number of hanging nodes remain");
            alive[i] = false;
            alive[j] = false;
            self.add_segment(hanging[i], hanging[j]);
        }
        hanging.clear();
        Ok(())
    }

    fn drop_isolated(&mut self) -> bool {
        let isolated: Vec<PointId> = self.adj.iter().filter(|(_, l)| l.is_empty()).map(|(&id, _)| id).collect();
        for &id in &isolated {
            self.remove_node(id);
        }
        !isolated.is_empty()
    }

    /// Keeps the two `xy`-nearest segments at every node of degree above 2.
    /// Returns whether the book changed.
    pub fn check_multiplicity<P>(&mut self, pos: &P) -> Result<bool, BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        let crowded: Vec<PointId> = self.adj.iter().filter(|(_, l)| l.len() > 2).map(|(&id, _)| id).collect();
        if crowded.is_empty() {
            return Ok(false);
        }
        for id in crowded {
            let list = match self.adj.get(&id) {
                Some(l) if l.len() > 2 => l.clone(),
                _ => continue,
            };
            let p = pos(id);
            let mut ranked: Vec<(f64, PointId)> = list.iter().map(|&b| (xy_distance(p, pos(b)), b)).collect();
            ranked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            for &(_, b) in &ranked[2..] {
                self.remove_segment(id, b);
            }
        }
        self.drop_isolated();
        self.stitch_hanging_nodes(pos)?;
        Ok(true)
    }

    /// Deletes self-loops and every copy of a repeated segment, then removes
    /// isolated nodes and stitches hanging ones. Returns whether the book changed.
    pub fn check_loops<P>(&mut self, pos: &P) -> Result<bool, BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        let segments = self.segments();
        let mut bad = BTreeSet::new();
        for w in segments.windows(2) {
            if w[0] == w[1] {
                bad.insert(w[0]);
            }
        }
        for &s in &segments {
            if s.0 == s.1 {
                bad.insert(s);
            }
        }
        if bad.is_empty() {
            return Ok(false);
        }
        for (a, b) in bad {
            while self.remove_segment(a, b) {}
        }
        self.drop_isolated();
        self.stitch_hanging_nodes(pos)?;
        Ok(true)
    }

    /// Uncrosses the first pair of intersecting segments that involves a dirty
    /// node, by exchanging partners. Returns whether the book changed.
    pub fn check_intersections<P>(&mut self, pos: &P) -> bool
    where
        P: Fn(PointId) -> Xy,
    {
        let segments = self.segments();
        let dirty: Vec<(PointId, PointId)> = segments
            .iter()
            .copied()
            .filter(|(a, b)| a != b && (self.dirty.contains(a) || self.dirty.contains(b)))
            .collect();
        for &(a, b) in &dirty {
            let (pa, pb) = (pos(a), pos(b));
            for &(c, d) in &segments {
                if c == d || c == a || c == b || d == a || d == b {
                    continue;
                }
                if segments_intersect(pa, pb, pos(c), pos(d)) {
                    self.uncross((a, b), (c, d), pos);
                    return true;
                }
            }
        }
        false
    }

    fn uncross<P>(&mut self, (a, b): (PointId, PointId), (c, d): (PointId, PointId), pos: &P)
    where
        P: Fn(PointId) -> Xy,
    {
        self.remove_segment(a, b);
        self.remove_segment(c, d);
        let len = |x: PointId, y: PointId| xy_distance(pos(x), pos(y));
        let options = [((a, c), (b, d)), ((a, d), (b, c))];
        let score = |(s1, s2): ((PointId, PointId), (PointId, PointId))| {
            let dup = self.neighbours(s1.0).contains(&s1.1) || self.neighbours(s2.0).contains(&s2.1);
            (dup, len(s1.0, s1.1) + len(s2.0, s2.1))
        };
        let (d0, l0) = score(options[0]);
        let (d1, l1) = score(options[1]);
        let pick = if d0 != d1 {
            usize::from(d0)
        } else if l1 < l0 {
            1
        } else {
            0
        };
        let (s1, s2) = options[pick];
        self.add_segment(s1.0, s1.1);
        self.add_segment(s2.0, s2.1);
    }

    /// Removes the apex of the first spike found at a dirty node and stitches
    /// its neighbours. Returns whether the book changed.
    pub fn check_spikes<P>(&mut self, pos: &P) -> Result<bool, BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        let dirty: Vec<PointId> = self.dirty.iter().copied().collect();
        for id in dirty {
            let list = self.neighbours(id);
            if list.len() != 2 || list[0] == id || list[1] == id || list[0] == list[1] {
                continue;
            }
            let spike = match apex_angle(pos(id), pos(list[0]), pos(list[1])) {
                None => true,
                Some(angle) => angle < SPIKE_ANGLE,
            };
            if spike {
                self.remove_node(id);
                self.stitch_hanging_nodes(pos)?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Runs the multiplicity, loop, intersection and spike checks until none
    /// of them changes the book, then clears the dirty set.
    pub fn clean<P>(&mut self, pos: &P) -> Result<(), BookError>
    where
        P: Fn(PointId) -> Xy,
    {
        for _ in 0..MAX_CLEAN_PASSES {
            let mut changed = self.check_multiplicity(pos)?;
            changed |= self.check_loops(pos)?;
            changed |= self.drop_isolated();
            if !changed {
                changed = self.check_intersections(pos);
            }
            if !changed {
                changed = self.check_spikes(pos)?;
            }
            if !changed {
                self.dirty.clear();
                return Ok(());
            }
        }
        Err(BookError::NoFixedPoint(MAX_CLEAN_PASSES))
    }

    /// Brute-force scan of all four invariants.
    pub fn violations<P>(&self, pos: &P) -> Violations
    where
        P: Fn(PointId) -> Xy,
    {
        let mut v = Violations::default();
        for list in self.adj.values() {
            if list.len() != 2 {
                v.wrong_degree += 1;
            }
        }
        let segments = self.segments();
        v.self_loops = segments.iter().filter(|s| s.0 == s.1).count();
        v.duplicates = segments.windows(2).filter(|w| w[0] == w[1]).count();
        for (i, &(a, b)) in segments.iter().enumerate() {
            for &(c, d) in &segments[i + 1..] {
                if a == b || c == d || a == c || a == d || b == c || b == d {
                    continue;
                }
                if segments_intersect(pos(a), pos(b), pos(c), pos(d)) {
                    v.intersections += 1;
                }
            }
        }
        for (&id, list) in &self.adj {
            if list.len() == 2 && list[0] != id && list[1] != id && list[0] != list[1] {
                match apex_angle(pos(id), pos(list[0]), pos(list[1])) {
                    Some(angle) if angle >= SPIKE_ANGLE => {}
                    _ => v.spikes += 1,
                }
            }
        }
        v
    }

    /// Node sets of the connected components, each sorted by id.
    pub fn components(&self) -> Vec<Vec<PointId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.adj.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in self.neighbours(x) {
                    if seen.insert(y) {
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(v: &[usize]) -> Vec<PointId> {
        v.iter().map(|&i| PointId(i)).collect()
    }

    fn lookup(points: Vec<Xy>) -> impl Fn(PointId) -> Xy {
        move |id: PointId| points[id.0]
    }

    fn square() -> (Book, impl Fn(PointId) -> Xy) {
        let pos = lookup(vec![[9.0, 9.0], [0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [2.0, 0.0]]);
        (Book::from_cycles(&[ids(&[1, 2, 3, 4])]), pos)
    }

    fn has(book: &Book, a: usize, b: usize) -> bool {
        book.neighbours(PointId(a)).contains(&PointId(b))
    }

    #[test]
    fn replace_node_relabels() {
        let (mut book, _) = square();
        let original = book.clone();
        book.replace_node(PointId(2), PointId(5)).unwrap();
        assert!(has(&book, 1, 5) && has(&book, 5, 3));
        assert!(!book.contains(PointId(2)));
        book.replace_node(PointId(5), PointId(2)).unwrap();
        assert_eq!(book.segments(), original.segments());
        book.add_segment(PointId(1), PointId(3));
        assert!(matches!(book.replace_node(PointId(1), PointId(7)), Err(BookError::WrongDegree { degree: 3, .. })));
        assert!(matches!(book.replace_node(PointId(9), PointId(7)), Err(BookError::MissingNode(_))));
    }

    #[test]
    fn drop_node_square_and_triangle() {
        let (mut book, pos) = square();
        book.drop_node(PointId(2), &pos).unwrap();
        assert_eq!(book.segments(), vec![(PointId(1), PointId(3)), (PointId(1), PointId(4)), (PointId(3), PointId(4))]);
        book.drop_node(PointId(1), &pos).unwrap();
        assert_eq!(book.segments(), vec![(PointId(3), PointId(4)), (PointId(3), PointId(4))]);
        book.clean(&pos).unwrap();
        assert_eq!(book.node_count(), 0);
        assert_eq!(book.take_removed(), ids(&[2, 1, 3, 4]));
        assert!(matches!(book.drop_node(PointId(2), &pos), Err(BookError::MissingNode(_))));
    }

    #[test]
    fn stitch_joins_nearest_pair_first() {
        // hanging nodes 1..4 on a line; 2-3 closest, then 1-4
        let pos = lookup(vec![[0.0; 2], [0.0, 0.0], [1.0, 0.0], [1.1, 0.0], [3.0, 0.0], [0.0, 5.0], [1.0, 5.0], [1.1, 5.0], [3.0, 5.0]]);
        let mut book = Book::new();
        for k in 1..=4 {
            book.add_segment(PointId(k), PointId(k + 4));
        }
        // brute-force oracle over the three pairings
        let pairings = [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]];
        let d = |a: usize, b: usize| xy_distance(pos(PointId(a)), pos(PointId(b)));
        let min_pair = pairings.iter().flatten().map(|&(a, b)| (d(a, b), a, b)).fold((f64::INFINITY, 0, 0), |m, x| if x.0 < m.0 { x } else { m });
        book.stitch_hanging_nodes(&pos).unwrap();
        assert!(has(&book, min_pair.1, min_pair.2));
        assert!(has(&book, 1, 4));
        assert!(book.hanging_nodes().is_empty());

        let mut odd = Book::new();
        odd.add_segment(PointId(1), PointId(2));
        odd.add_segment(PointId(2), PointId(3));
        odd.add_segment(PointId(3), PointId(4));
        odd.add_segment(PointId(3), PointId(5));
        assert!(matches!(odd.stitch_hanging_nodes(&pos), Err(BookError::OddHangingCount(3))));

        let (mut closed, pos) = square();
        let before = closed.segments();
        closed.stitch_hanging_nodes(&pos).unwrap();
        assert_eq!(closed.segments(), before);
    }

    #[test]
    fn multiplicity_keeps_two_nearest() {
        // node 0 at the centre joined to four spokes of two triangles
        let pos = lookup(vec![[0.0, 0.0], [1.0, 0.1], [1.0, -0.1], [-2.0, 0.2], [-2.0, -0.2]]);
        let mut book = Book::new();
        book.add_segment(PointId(0), PointId(1));
        book.add_segment(PointId(1), PointId(2));
        book.add_segment(PointId(2), PointId(0));
        book.add_segment(PointId(0), PointId(3));
        book.add_segment(PointId(3), PointId(4));
        book.add_segment(PointId(4), PointId(0));
        book.check_multiplicity(&pos).unwrap();
        assert_eq!(book.degree(PointId(0)), 2);
        assert!(has(&book, 0, 1) && has(&book, 0, 2));
        assert!(book.nodes().all(|id| book.degree(id) == 2));
    }

    #[test]
    fn bowtie_is_uncrossed() {
        let pos = lookup(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        let mut book = Book::from_cycles(&[ids(&[0, 1, 2, 3])]);
        assert_eq!(book.violations(&pos).intersections, 1);
        book.mark_all_dirty();
        book.clean(&pos).unwrap();
        assert!(book.violations(&pos).is_clean(), "{:?}", book.violations(&pos));
        assert_eq!(book.segment_count(), 4);
    }

    #[test]
    fn spike_threshold() {
        for (angle, kept) in [(0.1 * PI, false), (0.5 * PI, true)] {
            let pos = lookup(vec![[0.0, 0.0], [1.0, 0.0], [angle.cos(), angle.sin()], [-2.0, -0.5], [2.0, -3.0]]);
            let mut book = Book::from_cycles(&[ids(&[0, 1, 4, 3, 2])]);
            book.mark_all_dirty();
            assert_eq!(book.check_spikes(&pos).unwrap(), !kept);
            assert_eq!(book.contains(PointId(0)), kept);
        }
    }

    #[test]
    fn intersection_predicates() {
        assert!(segments_intersect([0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]));
        assert!(!segments_intersect([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]));
        assert!(segments_intersect([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0]));
        assert!(segments_intersect([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]));
        assert!(!segments_intersect([0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn clean_restores_invariants(
            pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 6..30),
            extra in prop::collection::vec((0usize..30, 0usize..30), 0..6),
        ) {
            let n = pts.len();
            let points: Vec<Xy> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let pos = move |id: PointId| points[id.0];
            let mut book = Book::from_cycles(&[(0..n).map(PointId).collect()]);
            for (a, b) in extra {
                book.add_segment(PointId(a % n), PointId(b % n));
            }
            book.mark_all_dirty();
            let before = book.segment_count() + book.node_count();
            book.clean(&pos).unwrap();
            let v = book.violations(&pos);
            prop_assert!(v.is_clean(), "{:?}", v);
            prop_assert_eq!(book.segment_count(), book.node_count());
            prop_assert!(book.segment_count() + book.node_count() <= before + n);
        }
    }
}
