//! Sparse subprobability distributions over finite supports.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::weight::Weight;

/// A subprobability measure with finite support, stored sparsely.
///
/// Keys are indices (or tuples/words of indices) into finite spaces. Entries
/// are kept sorted by key and zero weights are never stored, so two
/// distributions are equal exactly when they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubDistribution<K: Ord, W> {
    weights: BTreeMap<K, W>,
}

impl<K: Ord, W> Default for SubDistribution<K, W> {
    fn default() -> Self {
        SubDistribution { weights: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, W: Weight> SubDistribution<K, W> {
    /// The zero measure.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Dirac measure at `key`.
    pub fn point(key: K) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(key, W::one());
        SubDistribution { weights }
    }

    /// Builds a distribution from `(key, weight)` entries, summing repeated
    /// keys. Fails on negative weights or total mass above one.
    pub fn from_weights(entries: impl IntoIterator<Item = (K, W)>) -> Result<Self> {
        let mut d = Self::zero();
        for (k, w) in entries {
            if w.is_negative() {
                return Err(Error::MalformedInput(format!("negative weight {}", w.to_fraction_string())));
            }
            d.add_weight(k, w);
        }
        let mass = d.mass();
        if mass > W::one() {
            return Err(Error::MalformedInput(format!("total mass {} exceeds one", mass.to_fraction_string())));
        }
        Ok(d)
    }

    /// Adds `w` (assumed nonnegative) to the weight at `key`.
    pub(crate) fn add_weight(&mut self, key: K, w: W) {
        if w.is_zero() {
            return;
        }
        match self.weights.get_mut(&key) {
            Some(existing) => *existing = existing.clone() + w,
            None => {
                self.weights.insert(key, w);
            }
        }
    }

    /// Total mass.
    pub fn mass(&self) -> W {
        self.weights.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn weight(&self, key: &K) -> W {
        self.weights.get(key).cloned().unwrap_or_else(W::zero)
    }

    /// Mass of a set given as a predicate on keys.
    pub fn measure(&self, mut member: impl FnMut(&K) -> bool) -> W {
        self.weights.iter().filter(|(k, _)| member(k)).fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &W)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// Image measure under `map` (the functor action on measures).
    pub fn map_keys<K2: Ord + Clone>(&self, mut map: impl FnMut(&K) -> K2) -> SubDistribution<K2, W> {
        let mut out = SubDistribution::zero();
        for (k, w) in &self.weights {
            out.add_weight(map(k), w.clone());
        }
        out
    }

    /// `factor · self`. `factor` must be nonnegative.
    pub fn scaled(&self, factor: &W) -> Self {
        let mut out = Self::zero();
        if factor.is_zero() {
            return out;
        }
        for (k, w) in &self.weights {
            out.weights.insert(k.clone(), w.clone() * factor.clone());
        }
        out
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &W) {
        if factor.is_zero() {
            return;
        }
        for (k, w) in &other.weights {
            self.add_weight(k.clone(), w.clone() * factor.clone());
        }
    }

    /// First key (in key order) where the two measures differ, with the
    /// weights of `self` and `other` there.
    pub fn first_difference(&self, other: &Self) -> Option<(K, W, W)> {
        let mut left = self.weights.iter().peekable();
        let mut right = other.weights.iter().peekable();
        loop {
            let (k, a, b) = match (left.peek(), right.peek()) {
                (None, None) => return None,
                (Some((k, a)), None) => ((*k).clone(), (*a).clone(), W::zero()),
                (None, Some((k, b))) => ((*k).clone(), W::zero(), (*b).clone()),
                (Some((ka, a)), Some((kb, b))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => ((*ka).clone(), (*a).clone(), W::zero()),
                    std::cmp::Ordering::Greater => ((*kb).clone(), W::zero(), (*b).clone()),
                    std::cmp::Ordering::Equal => {
                        if a != b {
                            return Some(((*ka).clone(), (*a).clone(), (*b).clone()));
                        }
                        left.next();
                        right.next();
                        continue;
                    }
                },
            };
            return Some((k, a, b));
        }
    }
}

impl<W: Weight> SubDistribution<usize, W> {
    /// Image measure along a total map given as an index table.
    pub fn push_forward(&self, map: &[usize]) -> Result<Self> {
        if let Some(bad) = self.support().find(|&&k| k >= map.len()) {
            return Err(Error::MalformedInput(format!(
                "support point {bad} lies outside the domain of the map (size {})",
                map.len()
            )));
        }
        Ok(self.map_keys(|&k| map[k]))
    }
}

impl<K: Ord + Clone, W: Weight> FromIterator<(K, W)> for SubDistribution<K, W> {
    /// Collects without the mass check; callers supply nonnegative entries.
    fn from_iter<I: IntoIterator<Item = (K, W)>>(iter: I) -> Self {
        let mut d = Self::zero();
        for (k, w) in iter {
            d.add_weight(k, w);
        }
        d
    }
}
