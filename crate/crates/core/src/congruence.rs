//! Friendship of equivalence relations and congruences of automata.
//!
//! On a finite space every relation is created by its own block list and a
//! set is invariant iff it is a union of blocks. A subprobability restricted
//! to the invariant sets is therefore determined by its block masses, and
//! "`ξ` friendly to `ϑ`" reduces to: `ξ`-equivalent points have equal
//! `ϑ`-block-mass vectors.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::automaton::StochasticAutomaton;
use crate::distribution::SubDistribution;
use crate::error::{Error, Result};
use crate::factor::factor_automaton;
use crate::morphism::Morphism;
use crate::partition::{kernel_partition, lift_partition, Classify, Partition, Rect};
use crate::weight::Weight;

/// Two equivalent points whose images disagree on an invariant block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendshipWitness<K, C, W> {
    pub left: K,
    pub right: K,
    /// Class (block) of the target relation carrying different masses.
    pub block: C,
    pub left_mass: W,
    pub right_mass: W,
}

/// Outcome of a friendship check. The witness is present iff the check
/// failed, and is the first failing pair in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendshipReport<K, C, W> {
    pub witness: Option<FriendshipWitness<K, C, W>>,
}

impl<K, C, W> FriendshipReport<K, C, W> {
    pub fn friendly(&self) -> bool {
        self.witness.is_none()
    }

    pub(crate) fn friendly_report() -> Self {
        FriendshipReport { witness: None }
    }
}

/// Report of [`is_congruence`]: rows are `(input, state)`, blocks are
/// `(γ-block, β-block)`.
pub type CongruenceReport<W> = FriendshipReport<(usize, usize), (usize, usize), W>;

/// Masses of the classes of `theta`, sparse (classes of mass zero absent).
pub fn invariant_masses<K, W, T>(d: &SubDistribution<K, W>, theta: &T) -> BTreeMap<T::Class, W>
where
    K: Ord + Clone,
    W: Weight,
    T: Classify<K>,
{
    let mut out: BTreeMap<T::Class, W> = BTreeMap::new();
    for (k, w) in d.iter() {
        let c = theta.classify(k);
        match out.get_mut(&c) {
            Some(m) => *m = m.clone() + w.clone(),
            None => {
                out.insert(c, w.clone());
            }
        }
    }
    out
}

/// Mass of every block of `theta`, indexed by block id.
pub fn invariant_mass<W: Weight>(d: &SubDistribution<usize, W>, theta: &Partition) -> Result<Vec<W>> {
    if let Some(bad) = d.support().find(|&&k| k >= theta.len()) {
        return Err(Error::PreconditionViolated(format!(
            "distribution has point {bad} outside a space of size {}",
            theta.len()
        )));
    }
    let mut out = vec![W::zero(); theta.num_blocks()];
    for (c, m) in invariant_masses(d, theta) {
        out[c] = m;
    }
    Ok(out)
}

/// First block charged by `a` where `b` differs, else the first block
/// charged only by `b`.
fn first_mass_difference<C: Ord + Clone, W: Weight>(a: &BTreeMap<C, W>, b: &BTreeMap<C, W>) -> Option<(C, W, W)> {
    a.iter()
        .find_map(|(c, x)| {
            let y = b.get(c).cloned().unwrap_or_else(W::zero);
            (*x != y).then(|| (c.clone(), x.clone(), y))
        })
        .or_else(|| b.iter().find(|(c, _)| !a.contains_key(*c)).map(|(c, y)| (c.clone(), W::zero(), y.clone())))
}

/// Generic friendship check over a stochastic relation given as rows.
///
/// Within each `xi`-class only consecutive members (in row order) are
/// compared; equality of block masses is transitive.
pub fn friendship<'a, K, H, W, Xi, Theta, I>(rows: I, xi: &Xi, theta: &Theta) -> FriendshipReport<K, Theta::Class, W>
where
    K: Clone,
    H: Ord + Clone + 'a,
    W: Weight,
    Xi: Classify<K>,
    Theta: Classify<H>,
    I: IntoIterator<Item = (K, &'a SubDistribution<H, W>)>,
{
    // latest member of each class seen so far, with its block masses
    let mut last = BTreeMap::<Xi::Class, (K, BTreeMap<Theta::Class, W>)>::new();
    for (key, row) in rows {
        let masses = invariant_masses(row, theta);
        let class = xi.classify(&key);
        if let Some((prev, prev_masses)) = last.get(&class) {
            if let Some((block, left_mass, right_mass)) = first_mass_difference(prev_masses, &masses) {
                return FriendshipReport {
                    witness: Some(FriendshipWitness { left: prev.clone(), right: key, block, left_mass, right_mass }),
                };
            }
        }
        last.insert(class, (key, masses));
    }
    FriendshipReport::friendly_report()
}

/// Is `xi` (on the row index space) friendly to `theta` for `rows`?
pub fn is_friendly<W: Weight>(
    rows: &[SubDistribution<usize, W>],
    xi: &Partition,
    theta: &Partition,
) -> Result<FriendshipReport<usize, usize, W>> {
    check_relation(rows, xi, theta)?;
    Ok(friendship(rows.iter().enumerate(), xi, theta))
}

pub(crate) fn check_relation<W: Weight>(
    rows: &[SubDistribution<usize, W>],
    xi: &Partition,
    theta: &Partition,
) -> Result<()> {
    if rows.len() != xi.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} rows but the source relation covers {} points",
            rows.len(),
            xi.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some(bad) = row.support().find(|&&k| k >= theta.len()) {
            return Err(Error::PreconditionViolated(format!(
                "row {i} charges point {bad} outside the target space of size {}",
                theta.len()
            )));
        }
    }
    Ok(())
}

/// A candidate congruence `(α, β, γ)` on inputs, outputs and states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceTriple {
    pub alpha: Partition,
    pub beta: Partition,
    pub gamma: Partition,
}

impl CongruenceTriple {
    pub fn new(alpha: Partition, beta: Partition, gamma: Partition) -> Self {
        CongruenceTriple { alpha, beta, gamma }
    }

    /// `(1_X, 1_Y, 1_Z)`.
    pub fn discrete<W: Weight>(a: &StochasticAutomaton<W>) -> Self {
        CongruenceTriple {
            alpha: Partition::discrete(a.inputs().len()),
            beta: Partition::discrete(a.outputs().len()),
            gamma: Partition::discrete(a.states().len()),
        }
    }

    pub fn check_spaces<W: Weight>(&self, a: &StochasticAutomaton<W>) -> Result<()> {
        for (name, p, n) in [
            ("alpha", &self.alpha, a.inputs().len()),
            ("beta", &self.beta, a.outputs().len()),
            ("gamma", &self.gamma, a.states().len()),
        ] {
            if p.len() != n {
                return Err(Error::PreconditionViolated(format!(
                    "{name} partitions {} points, the automaton space has {n}",
                    p.len()
                )));
            }
        }
        Ok(())
    }
}

/// `α × γ` friendly to `γ × β` for the transition law.
pub fn is_congruence<W: Weight>(a: &StochasticAutomaton<W>, c: &CongruenceTriple) -> Result<CongruenceReport<W>> {
    c.check_spaces(a)?;
    Ok(friendship(a.rows(), &Rect(&c.alpha, &c.gamma), &Rect(&c.gamma, &c.beta)))
}

/// Like [`is_congruence`], but failure becomes [`Error::NotACongruence`].
pub(crate) fn require_congruence<W: Weight>(a: &StochasticAutomaton<W>, c: &CongruenceTriple) -> Result<()> {
    let report = is_congruence(a, c)?;
    match report.witness {
        None => Ok(()),
        Some(w) => Err(Error::NotACongruence(describe_congruence_witness(a, c, &w))),
    }
}

/// Human-readable rendering of a congruence witness with labels.
pub fn describe_congruence_witness<W: Weight>(
    a: &StochasticAutomaton<W>,
    c: &CongruenceTriple,
    w: &FriendshipWitness<(usize, usize), (usize, usize), W>,
) -> String {
    let x = a.inputs();
    let z = a.states();
    format!(
        "({},{}) and ({},{}) give block {}×{} masses {} and {}",
        x.label(w.left.0),
        z.label(w.left.1),
        x.label(w.right.0),
        z.label(w.right.1),
        z.render_set(c.gamma.block(w.block.0)),
        a.outputs().render_set(c.beta.block(w.block.1)),
        w.left_mass.to_fraction_string(),
        w.right_mass.to_fraction_string(),
    )
}

/// The coarsest `γ` refining `seed` with `(alpha, beta, γ)` a congruence.
///
/// Partition refinement: a block is split whenever two of its states, under
/// some input, put different masses on the current `γ × β` blocks. Each
/// round either splits a block or stops, so at most `|Z|` rounds run. If the
/// stable `γ` still fails the check (inputs identified by `alpha` disagree at
/// a common state), no finer `γ` can pass either and `NotACongruence` is
/// returned.
pub fn coarsest_state_congruence<W: Weight>(
    a: &StochasticAutomaton<W>,
    alpha: &Partition,
    beta: &Partition,
    seed: &Partition,
) -> Result<Partition> {
    let candidate = CongruenceTriple::new(alpha.clone(), beta.clone(), seed.clone());
    candidate.check_spaces(a)?;

    let mut gamma = seed.clone();
    loop {
        let signatures = (0..a.states().len()).map(|z| {
            let per_input: Vec<_> =
                (0..a.inputs().len()).map(|x| invariant_masses(a.row(x, z), &Rect(&gamma, beta))).collect();
            (gamma.class_of(z), per_input)
        });
        let refined = Partition::from_keys(signatures);
        if refined.num_blocks() == gamma.num_blocks() {
            break;
        }
        gamma = refined;
    }

    require_congruence(a, &CongruenceTriple::new(alpha.clone(), beta.clone(), gamma.clone()))?;
    Ok(gamma)
}

/// `c ∗ c'`: the componentwise lifting of a congruence on the factor
/// automaton back to the base automaton.
pub fn compose_congruences<W: Weight>(
    a: &StochasticAutomaton<W>,
    c: &CongruenceTriple,
    c_prime: &CongruenceTriple,
) -> Result<CongruenceTriple> {
    let factored = factor_automaton(a, c)?;
    require_congruence(factored.factor(), c_prime)?;
    let lifted = CongruenceTriple {
        alpha: lift_partition(&c.alpha, &c_prime.alpha)?,
        beta: lift_partition(&c.beta, &c_prime.beta)?,
        gamma: lift_partition(&c.gamma, &c_prime.gamma)?,
    };
    if let Some(w) = is_congruence(a, &lifted)?.witness {
        return Err(Error::InternalConsistency(format!(
            "lifted triple is not a congruence: {}",
            describe_congruence_witness(a, &lifted, &w)
        )));
    }
    Ok(lifted)
}

/// `(Kern f, Kern g, Kern h)` of a morphism.
pub fn kernel_congruence<W: Weight>(m: &Morphism<W>) -> Result<CongruenceTriple> {
    let check = crate::morphism::is_morphism(m.source(), m.target(), m.f(), m.g(), m.h())?;
    if let Some(cx) = check.counterexample {
        return Err(Error::NotAMorphism(crate::morphism::describe_counterexample(m.source(), m.target(), &cx)));
    }
    let c = CongruenceTriple {
        alpha: kernel_partition(m.f()),
        beta: kernel_partition(m.g()),
        gamma: kernel_partition(m.h()),
    };
    if let Some(w) = is_congruence(m.source(), &c)?.witness {
        return Err(Error::InternalConsistency(format!(
            "kernel triple is not a congruence: {}",
            describe_congruence_witness(m.source(), &c, &w)
        )));
    }
    Ok(c)
}
