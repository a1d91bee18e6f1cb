//! Brute-force reference implementations. They only read automaton tables
//! and partition classes; none of the library's checking code is used.

use std::collections::BTreeMap;

use num_traits::Zero;
use stocon::{Automaton, Distribution, Partition, Rational, Weight};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

/// Mass of `d` on the union of the `theta`-blocks selected by `mask`.
fn union_mass(d: &Distribution, theta: &Partition, mask: u64) -> Rational {
    let mut m = q(0, 1);
    for (&h, p) in d.iter() {
        if mask >> theta.class_of(h) & 1 == 1 {
            m += p;
        }
    }
    m
}

/// Friendship by enumerating all `2^(#blocks)` invariant sets and all
/// related pairs.
pub fn brute_friendly(rows: &[Distribution], xi: &Partition, theta: &Partition) -> bool {
    let k = theta.num_blocks();
    assert!(k < 20, "too many blocks to enumerate");
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if xi.class_of(i) != xi.class_of(j) {
                continue;
            }
            for mask in 0..1u64 << k {
                if union_mass(&rows[i], theta, mask) != union_mass(&rows[j], theta, mask) {
                    return false;
                }
            }
        }
    }
    true
}

/// `∫ f dd`.
pub fn integral(d: &Distribution, f: &[Rational]) -> Rational {
    d.iter().fold(q(0, 1), |acc, (&h, p)| acc + p.clone() * f[h].clone())
}

/// Rows of the transition law over flattened `(x, z)` and `(z', y')`, with
/// the product relations spelled out as flat partitions.
pub fn flat_law(
    a: &Automaton,
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
) -> (Vec<Distribution>, Partition, Partition) {
    let (nx, ny, nz) = (a.inputs().len(), a.outputs().len(), a.states().len());
    let mut rows = Vec::new();
    let mut left = Vec::new();
    for x in 0..nx {
        for z in 0..nz {
            let row: Distribution = a.row(x, z).iter().map(|(&(n, y), p)| (n * ny + y, p.clone())).collect();
            rows.push(row);
            left.push((alpha.class_of(x), gamma.class_of(z)));
        }
    }
    let right = (0..nz * ny).map(|i| (gamma.class_of(i / ny), beta.class_of(i % ny)));
    (rows, Partition::from_keys(left), Partition::from_keys(right))
}

pub fn brute_congruence(a: &Automaton, alpha: &Partition, beta: &Partition, gamma: &Partition) -> bool {
    let (rows, left, right) = flat_law(a, alpha, beta, gamma);
    brute_friendly(&rows, &left, &right)
}

/// Every set partition of `0..n`, as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::from_keys(prefix.iter().copied()));
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            prefix.push(c);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

/// `p` refines `q`: every `p`-related pair is `q`-related.
pub fn refines(p: &Partition, q: &Partition) -> bool {
    (0..p.len()).all(|i| (0..p.len()).all(|j| !p.related(i, j) || q.related(i, j)))
}

/// The unique coarsest congruence-completing partition refining `seed`, if
/// one exists, by exhaustive search. `Err` when several maximal ones exist.
pub fn brute_coarsest(
    a: &Automaton,
    alpha: &Partition,
    beta: &Partition,
    seed: &Partition,
) -> Result<Option<Partition>, String> {
    let good: Vec<Partition> = all_partitions(a.states().len())
        .into_iter()
        .filter(|g| refines(g, seed) && brute_congruence(a, alpha, beta, g))
        .collect();
    let maximal: Vec<&Partition> = good.iter().filter(|g| !good.iter().any(|h| h != *g && refines(g, h))).collect();
    match maximal.len() {
        0 => Ok(None),
        1 => Ok(Some(maximal[0].clone())),
        k => Err(format!("{k} maximal partitions")),
    }
}

/// `K(v, z)` by enumerating every sequence of `(state, output)` steps.
pub fn path_extend(a: &Automaton, v: &[usize], z: usize) -> BTreeMap<(usize, Vec<usize>), Rational> {
    let mut out = BTreeMap::new();
    fn walk(
        a: &Automaton,
        v: &[usize],
        z: usize,
        word: &mut Vec<usize>,
        p: Rational,
        out: &mut BTreeMap<(usize, Vec<usize>), Rational>,
    ) {
        let Some((&x, rest)) = v.split_first() else {
            *out.entry((z, word.clone())).or_insert_with(|| q(0, 1)) += p;
            return;
        };
        for n in 0..a.states().len() {
            for y in 0..a.outputs().len() {
                let w = a.row(x, z).weight(&(n, y));
                if w.is_zero() {
                    continue;
                }
                word.push(y);
                walk(a, rest, n, word, p.clone() * w, out);
                word.pop();
            }
        }
    }
    walk(a, v, z, &mut Vec::new(), q(1, 1), &mut out);
    out.retain(|_, p| !p.is_zero());
    out
}

/// `K^{|v|}_μ(v)` from [`path_extend`].
pub fn path_behavior(a: &Automaton, mu: &Distribution, v: &[usize]) -> BTreeMap<Vec<usize>, Rational> {
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (&z, m) in mu.iter() {
        for ((_, w), p) in path_extend(a, v, z) {
            *out.entry(w).or_insert_with(|| q(0, 1)) += m.clone() * p;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Marginal onto the first `n` letters.
pub fn marginal(d: &BTreeMap<Vec<usize>, Rational>, n: usize) -> BTreeMap<Vec<usize>, Rational> {
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (w, p) in d {
        *out.entry(w[..n].to_vec()).or_insert_with(|| q(0, 1)) += p;
    }
    out
}

/// Does relabeling `src` through `(f, g, h)` give exactly the table of `dst`
/// (every entry, both directions)?
pub fn tables_match(src: &Automaton, dst: &Automaton, f: &[usize], g: &[usize], h: &[usize]) -> bool {
    for (x, &fx) in f.iter().enumerate() {
        for z in 0..src.states().len() {
            let mut pushed: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (&(n, y), p) in src.row(x, z).iter() {
                *pushed.entry((h[n], g[y])).or_insert_with(|| q(0, 1)) += p;
            }
            for n in 0..dst.states().len() {
                for y in 0..dst.outputs().len() {
                    let got = pushed.get(&(n, y)).cloned().unwrap_or_else(|| q(0, 1));
                    if dst.row(fx, h[z]).weight(&(n, y)) != got {
                        return false;
                    }
                }
            }
        }
    }
    true
}
