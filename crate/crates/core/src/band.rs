//! Time-keyed priority collection shared by the marcher and the grid FMM.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::PointId;

#[derive(Clone, Copy, Debug)]
struct Key(f64, PointId);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Set of tentative points ordered by `(t, id)`; ties go to the lowest id.
#[derive(Clone, Debug, Default)]
pub struct NarrowBand {
    order: BTreeSet<Key>,
    times: BTreeMap<PointId, f64>,
}

impl NarrowBand {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `id` or moves it to the new time.
    pub fn push(&mut self, id: PointId, t: f64) {
        if let Some(old) = self.times.insert(id, t) {
            self.order.remove(&Key(old, id));
        }
        self.order.insert(Key(t, id));
    }

    pub fn pop_min(&mut self) -> Option<(PointId, f64)> {
        let Key(t, id) = self.order.pop_first()?;
        self.times.remove(&id);
        Some((id, t))
    }

    pub fn peek_min(&self) -> Option<(PointId, f64)> {
        self.order.first().map(|k| (k.1, k.0))
    }

    pub fn remove(&mut self, id: PointId) -> bool {
        match self.times.remove(&id) {
            Some(t) => {
                self.order.remove(&Key(t, id));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.times.contains_key(&id)
    }

    pub fn time(&self, id: PointId) -> Option<f64> {
        self.times.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Members in increasing id order.
    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        self.times.keys().copied()
    }
}
