//! Equivalence relations on finite spaces.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{Error, Result};

/// A partition of `0..len` into nonempty blocks.
///
/// Canonical form: members of each block ascend, and blocks are ordered by
/// their least member. Block ids are positions in that order, so equal
/// relations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    class: Vec<usize>,
}

impl Partition {
    /// Partition from a class assignment `i ↦ key(i)`; points with equal
    /// keys share a block. This is the kernel of the assignment.
    pub fn from_keys<K: Ord>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut class = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, key) in keys.into_iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[id].push(i);
            class.push(id);
        }
        Partition { blocks, class }
    }

    /// Partition of `0..len` from explicit blocks, which must be nonempty,
    /// pairwise disjoint and cover the space.
    pub fn from_blocks(len: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; len];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::MalformedInput(format!("block {b} is empty")));
            }
            for &i in block {
                match owner.get_mut(i) {
                    None => return Err(Error::MalformedInput(format!("point {i} lies outside a space of size {len}"))),
                    Some(Some(_)) => return Err(Error::MalformedInput(format!("point {i} lies in two blocks"))),
                    Some(slot) => *slot = Some(b),
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::MalformedInput(format!("point {i} is in no block")));
        }
        Ok(Self::from_keys(owner.into_iter().map(Option::unwrap)))
    }

    /// The identity relation: every point alone.
    pub fn discrete(len: usize) -> Self {
        Self::from_keys(0..len)
    }

    /// The all relation: one block (empty partition when `len == 0`).
    pub fn single_block(len: usize) -> Self {
        Self::from_keys(std::iter::repeat_n((), len))
    }

    /// Size of the underlying space.
    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[usize] {
        &self.blocks[id]
    }

    /// Block id of `i` (the factor map `η`).
    pub fn class_of(&self, i: usize) -> usize {
        self.class[i]
    }

    /// The factor map as an index table.
    pub fn class_map(&self) -> &[usize] {
        &self.class
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.class.len()
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && self.blocks.iter().all(|b| b.iter().all(|&i| coarser.class_of(i) == coarser.class_of(b[0])))
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }
}

/// Kernel of a total map `0..m.len() → H`: blocks are the nonempty fibres.
pub fn kernel_partition(map: &[usize]) -> Partition {
    Partition::from_keys(map.iter().copied())
}

/// `p × q` on the flattened product, with `(i, j) ↦ i * q.len() + j`.
/// Blocks are the rectangles `P × Q`.
pub fn product_partition(p: &Partition, q: &Partition) -> Partition {
    let keys = (0..p.len()).flat_map(|i| (0..q.len()).map(move |j| (p.class_of(i), q.class_of(j))));
    Partition::from_keys(keys)
}

/// Lifting `ξ ∗ ζ`: `x ≡ x'` iff their `ξ`-blocks are `ζ`-equivalent.
pub fn lift_partition(xi: &Partition, zeta: &Partition) -> Result<Partition> {
    if zeta.len() != xi.num_blocks() {
        return Err(Error::PreconditionViolated(format!(
            "the lifted relation must partition the {} blocks of the base, it covers {}",
            xi.num_blocks(),
            zeta.len()
        )));
    }
    Ok(Partition::from_keys((0..xi.len()).map(|i| zeta.class_of(xi.class_of(i)))))
}

/// Image of `p` under a surjection `eta` whose kernel refines `p`: the blocks
/// of the result are `eta`-images of the blocks of `p`.
pub fn transport_partition(p: &Partition, eta: &[usize], target_len: usize) -> Result<Partition> {
    if eta.len() != p.len() {
        return Err(Error::PreconditionViolated("map and partition live on different spaces".into()));
    }
    let mut key: Vec<Option<usize>> = vec![None; target_len];
    for (i, &t) in eta.iter().enumerate() {
        let slot = key
            .get_mut(t)
            .ok_or_else(|| Error::PreconditionViolated(format!("map value {t} is outside the target")))?;
        match slot {
            Some(c) if *c != p.class_of(i) => {
                return Err(Error::PreconditionViolated("kernel of the map does not refine the partition".into()))
            }
            _ => *slot = Some(p.class_of(i)),
        }
    }
    if key.iter().any(Option::is_none) {
        return Err(Error::PreconditionViolated("map is not onto its target".into()));
    }
    Ok(Partition::from_keys(key.into_iter().map(Option::unwrap)))
}

/// `p^n` on words of length `n`, flattened with the first letter most
/// significant. Blocks are the `n`-fold rectangles of `p`-blocks.
pub fn power_partition(p: &Partition, n: usize) -> Result<Partition> {
    if n == 0 {
        return Err(Error::PreconditionViolated("word length must be at least one".into()));
    }
    let total =
        p.len().checked_pow(n as u32).ok_or_else(|| Error::PreconditionViolated("power space is too large".into()))?;
    let keys = (0..total).map(|mut idx| {
        let mut key = vec![0; n];
        for slot in key.iter_mut().rev() {
            *slot = p.class_of(idx % p.len());
            idx /= p.len();
        }
        key
    });
    Ok(Partition::from_keys(keys))
}

/// Something that assigns each key an equivalence class. Friendship checks
/// are generic over this so that product and power relations never need to
/// be materialized.
pub trait Classify<K: ?Sized> {
    type Class: Ord + Clone + Debug;

    fn classify(&self, key: &K) -> Self::Class;
}

impl Classify<usize> for Partition {
    type Class = usize;

    fn classify(&self, key: &usize) -> usize {
        self.class_of(*key)
    }
}

impl<K: ?Sized, T: Classify<K>> Classify<K> for &T {
    type Class = T::Class;

    fn classify(&self, key: &K) -> T::Class {
        (**self).classify(key)
    }
}

/// Product relation on pairs, classifying componentwise.
#[derive(Clone, Copy, Debug)]
pub struct Rect<A, B>(pub A, pub B);

impl<K1, K2, A: Classify<K1>, B: Classify<K2>> Classify<(K1, K2)> for Rect<A, B> {
    type Class = (A::Class, B::Class);

    fn classify(&self, key: &(K1, K2)) -> Self::Class {
        (self.0.classify(&key.0), self.1.classify(&key.1))
    }
}

/// Componentwise relation on words.
#[derive(Clone, Copy, Debug)]
pub struct Power<P>(pub P);

impl<P: Classify<usize>> Classify<Vec<usize>> for Power<P> {
    type Class = Vec<P::Class>;

    fn classify(&self, key: &Vec<usize>) -> Self::Class {
        key.iter().map(|l| self.0.classify(l)).collect()
    }
}
