//! Seeded instance builders beyond the library generator.

use rand::Rng;
use stocon::testing::Generator;
use stocon::{Distribution, Partition, PrefixTree, Rational, StreamPresentation, Weight};

/// Random nonnegative weights over `n` slots summing to `total`.
pub fn split(g: &mut Generator, n: usize, total: &Rational) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..n).map(|_| g.rng().gen_range(0..=5)).collect();
        let sum: i64 = raw.iter().sum();
        if sum > 0 {
            return raw.into_iter().map(|w| Rational::ratio(w, sum) * total.clone()).collect();
        }
    }
}

/// Spreads per-block masses over the members of each block at random.
fn spread(g: &mut Generator, p: &Partition, block_mass: &[Rational]) -> Distribution {
    let mut entries = Vec::new();
    for (b, members) in p.blocks().iter().enumerate() {
        let parts = split(g, members.len(), &block_mass[b]);
        entries.extend(members.iter().copied().zip(parts));
    }
    Distribution::from_weights(entries).expect("mass at most one")
}

/// Rows on `0..xi.len()` over `0..zeta.len()` for which `xi` is friendly to
/// `zeta`: within a `xi`-block all rows share their `zeta`-block masses.
pub fn friendly_relation(g: &mut Generator, xi: &Partition, zeta: &Partition) -> Vec<Distribution> {
    let shared: Vec<Vec<Rational>> = (0..xi.num_blocks())
        .map(|_| {
            let total = Rational::ratio(g.rng().gen_range(0..=4), 4);
            split(g, zeta.num_blocks(), &total)
        })
        .collect();
    (0..xi.len()).map(|i| spread(g, zeta, &shared[xi.class_of(i)])).collect()
}

/// Two distributions with equal masses on every `xi`-block.
pub fn rnd_pair(g: &mut Generator, xi: &Partition) -> (Distribution, Distribution) {
    let total = Rational::ratio(g.rng().gen_range(1..=4), 4);
    let blocks = split(g, xi.num_blocks(), &total);
    (spread(g, xi, &blocks), spread(g, xi, &blocks))
}

/// A prefix-free tree over `k` letters whose paths share prefixes: finite
/// words of length 2 to 4 grown from a common root, plus sometimes an
/// eventually periodic path.
pub fn branching_tree(g: &mut Generator, k: usize) -> PrefixTree {
    loop {
        let root: Vec<usize> = (0..g.range(1, 2)).map(|_| g.range(0, k - 1)).collect();
        let mut paths: Vec<StreamPresentation> = Vec::new();
        for _ in 0..g.range(2, 4) {
            let mut w = root.clone();
            let len = g.range(root.len() + 1, 4);
            while w.len() < len {
                w.push(g.range(0, k - 1));
            }
            let p = if g.range(0, 3) == 0 {
                StreamPresentation::periodic(w, vec![g.range(0, k - 1)])
            } else {
                StreamPresentation::finite(w)
            };
            paths.push(p);
        }
        if let Ok(t) = PrefixTree::new(paths) {
            if t.paths().len() >= 2 {
                return t;
            }
        }
    }
}
