//! Randomized relations and the Kleisli extension of a stochastic relation.

use crate::congruence::{check_relation, invariant_masses};
use crate::distribution::SubDistribution;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::weight::Weight;

/// `K*(μ) = Σ_x μ(x) · K(x)`.
pub fn kleisli_extension<K, W>(
    rows: &[SubDistribution<K, W>],
    mu: &SubDistribution<usize, W>,
) -> Result<SubDistribution<K, W>>
where
    K: Ord + Clone,
    W: Weight,
{
    let mut out = SubDistribution::zero();
    for (&x, p) in mu.iter() {
        let row = rows
            .get(x)
            .ok_or_else(|| Error::PreconditionViolated(format!("no row for point {x} ({} rows)", rows.len())))?;
        out.add_scaled(row, p);
    }
    Ok(out)
}

/// `μ ≡ ν (rnd ξ)`: equal mass on every `ξ`-block.
pub fn rnd_equivalent<W: Weight>(
    mu: &SubDistribution<usize, W>,
    nu: &SubDistribution<usize, W>,
    xi: &Partition,
) -> Result<bool> {
    for d in [mu, nu] {
        if let Some(bad) = d.support().find(|&&k| k >= xi.len()) {
            return Err(Error::PreconditionViolated(format!("point {bad} lies outside a space of size {}", xi.len())));
        }
    }
    Ok(invariant_masses(mu, xi) == invariant_masses(nu, xi))
}

/// Outcome of [`is_random_friend`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomFriendReport<W: Weight> {
    /// `(μ, ν)` with `μ ≡ ν (rnd ξ)` but `K*(μ) ≢ K*(ν) (rnd ζ)`.
    pub witness: Option<(SubDistribution<usize, W>, SubDistribution<usize, W>)>,
}

impl<W: Weight> RandomFriendReport<W> {
    pub fn random_friend(&self) -> bool {
        self.witness.is_none()
    }
}

/// Is `xi` a random friend to `zeta`?
///
/// Any `μ ≡ ν (rnd ξ)` differ by a signed combination of `δ_x − δ_x'` with
/// `x ≡ x' (ξ)`, and `K*` is linear, so it suffices to test point masses of
/// consecutive members of every block.
pub fn is_random_friend<W: Weight>(
    rows: &[SubDistribution<usize, W>],
    xi: &Partition,
    zeta: &Partition,
) -> Result<RandomFriendReport<W>> {
    check_relation(rows, xi, zeta)?;
    for block in xi.blocks() {
        for pair in block.windows(2) {
            let (mu, nu) = (SubDistribution::point(pair[0]), SubDistribution::point(pair[1]));
            let left = kleisli_extension(rows, &mu)?;
            let right = kleisli_extension(rows, &nu)?;
            if !rnd_equivalent(&left, &right, zeta)? {
                return Ok(RandomFriendReport { witness: Some((mu, nu)) });
            }
        }
    }
    Ok(RandomFriendReport { witness: None })
}
