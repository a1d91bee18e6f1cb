//! Reference fixtures and seeded instance generators.
//!
//! Used by the test suites and by `stocon selftest`. Everything here is
//! deterministic for a given seed.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Row, StochasticAutomaton};
use crate::congruence::CongruenceTriple;
use crate::distribution::SubDistribution;
use crate::partition::{kernel_partition, Partition};
use crate::space::FiniteSpace;
use crate::weight::Weight;
use crate::Rational;

const INPUT_LABELS: &str = "abcdefghij";
const OUTPUT_LABELS: &str = "0123456789";
const STATE_LABELS: &str = "stuvwpqrxyz";

fn space(name: &str, alphabet: &str, n: usize) -> Arc<FiniteSpace> {
    assert!(n <= alphabet.len(), "at most {} points", alphabet.len());
    Arc::new(FiniteSpace::new(name, alphabet.chars().take(n).map(String::from)).expect("distinct labels"))
}

/// Input space `a, b, …`.
pub fn inputs(n: usize) -> Arc<FiniteSpace> {
    space("inputs", INPUT_LABELS, n)
}

/// Output space `0, 1, …`.
pub fn outputs(n: usize) -> Arc<FiniteSpace> {
    space("outputs", OUTPUT_LABELS, n)
}

/// State space `s, t, u, …`.
pub fn states(n: usize) -> Arc<FiniteSpace> {
    space("states", STATE_LABELS, n)
}

/// The reference automaton: `X = {a, b}`, `Y = {0, 1}`, `Z = {s, t}`;
/// input `a` moves to either state with probability 1/2 emitting `0`, input
/// `b` stays put emitting `1`.
pub fn a0() -> StochasticAutomaton<Rational> {
    let half = Rational::ratio(1, 2);
    StochasticAutomaton::from_fn(inputs(2), outputs(2), states(2), |x, z| match x {
        0 => Row::from_weights([((0, 0), half.clone()), ((1, 0), half.clone())]).expect("mass one"),
        _ => Row::point((z, 1)),
    })
    .expect("valid automaton")
}

/// Seeded source of random instances.
pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// A random partition of `0..n` into at most `max_blocks` blocks.
    pub fn partition(&mut self, n: usize, max_blocks: usize) -> Partition {
        let k = self.rng.gen_range(1..=max_blocks.clamp(1, n.max(1)));
        Partition::from_keys((0..n).map(|_| self.rng.gen_range(0..k)))
    }

    /// A random surjection `0..n → 0..k` (requires `k ≤ n`).
    pub fn surjection(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k >= 1 && k <= n);
        let mut map: Vec<usize> = (0..k).chain((k..n).map(|_| self.rng.gen_range(0..k))).collect();
        map.shuffle(&mut self.rng);
        map
    }

    /// Nonnegative small-integer weights over `n` slots, not all zero,
    /// normalized to sum to one.
    fn split(&mut self, n: usize) -> Vec<Rational> {
        loop {
            let raw: Vec<i64> = (0..n).map(|_| self.rng.gen_range(0..=3)).collect();
            let total: i64 = raw.iter().sum();
            if total > 0 {
                return raw.into_iter().map(|w| Rational::ratio(w, total)).collect();
            }
        }
    }

    /// Total mass for a row: one, or a random value in `{0, 1/4, …, 1}`.
    fn row_mass(&mut self, full: bool) -> Rational {
        if full {
            Rational::ratio(1, 1)
        } else {
            Rational::ratio(self.rng.gen_range(0..=4), 4)
        }
    }

    /// A random subprobability on `0..n` with mass one when `full`.
    pub fn distribution(&mut self, n: usize, full: bool) -> SubDistribution<usize, Rational> {
        let mass = self.row_mass(full);
        self.split(n).into_iter().enumerate().map(|(i, w)| (i, w * mass.clone())).collect()
    }

    /// `n` random rows over `0..m`.
    pub fn relation(&mut self, n: usize, m: usize, full: bool) -> Vec<SubDistribution<usize, Rational>> {
        (0..n).map(|_| self.distribution(m, full)).collect()
    }

    /// A random automaton with the given space sizes.
    pub fn automaton(&mut self, nx: usize, ny: usize, nz: usize, full: bool) -> StochasticAutomaton<Rational> {
        StochasticAutomaton::from_fn(inputs(nx), outputs(ny), states(nz), |_, _| {
            let mass = self.row_mass(full);
            let w = self.split(nz * ny);
            (0..nz * ny).map(|i| ((i / ny, i % ny), w[i].clone() * mass.clone())).collect()
        })
        .expect("valid automaton")
    }

    /// Random automaton on spaces of the given sizes whose image under the
    /// surjections `(fx, fy, fz)` is exactly `coarse`: every coarse mass on a
    /// class pair is split at random among its members.
    ///
    /// With `product_split`, the split of `(z', y')` inside a class pair
    /// factors as (state part depending on the input class and the exact
    /// state) × (output part depending on the exact input and the state
    /// class). The kernels then also make `(1, 1, γ)` and `(α, β, 1)`
    /// congruences, so both stepwise orders go through.
    pub fn refine(
        &mut self,
        coarse: &StochasticAutomaton<Rational>,
        sizes: (usize, usize, usize),
        maps: (&[usize], &[usize], &[usize]),
        product_split: bool,
    ) -> StochasticAutomaton<Rational> {
        let (nx, ny, nz) = sizes;
        let (fx, fy, fz) = maps;
        let fibres = |map: &[usize], k: usize| {
            let mut out = vec![Vec::new(); k];
            for (i, &c) in map.iter().enumerate() {
                out[c].push(i);
            }
            out
        };
        let state_fibres = fibres(fz, coarse.states().len());
        let output_fibres = fibres(fy, coarse.outputs().len());

        let mut state_split: HashMap<(usize, usize, usize, usize), Vec<Rational>> = HashMap::new();
        let mut output_split: HashMap<(usize, usize, usize, usize), Vec<Rational>> = HashMap::new();

        let mut law = Vec::with_capacity(nx * nz);
        for (x, &class_x) in fx.iter().enumerate() {
            for (z, &class_z) in fz.iter().enumerate() {
                let mut row = Row::zero();
                for (&(cz, cy), m) in coarse.row(class_x, class_z).iter() {
                    let zs = &state_fibres[cz];
                    let ys = &output_fibres[cy];
                    if product_split {
                        let s = state_split.entry((class_x, z, cz, cy)).or_insert_with(|| self.split(zs.len())).clone();
                        let t =
                            output_split.entry((x, class_z, cz, cy)).or_insert_with(|| self.split(ys.len())).clone();
                        for (i, &n) in zs.iter().enumerate() {
                            for (j, &y) in ys.iter().enumerate() {
                                row.add_weight((n, y), m.clone() * s[i].clone() * t[j].clone());
                            }
                        }
                    } else {
                        let w = self.split(zs.len() * ys.len());
                        for (i, &n) in zs.iter().enumerate() {
                            for (j, &y) in ys.iter().enumerate() {
                                row.add_weight((n, y), m.clone() * w[i * ys.len() + j].clone());
                            }
                        }
                    }
                }
                law.push(row);
            }
        }
        StochasticAutomaton::new(inputs(nx), outputs(ny), states(nz), law).expect("valid automaton")
    }

    /// A random automaton on the given sizes together with a congruence it
    /// satisfies by construction (random class counts).
    pub fn congruent(
        &mut self,
        sizes: (usize, usize, usize),
        full: bool,
        product_split: bool,
    ) -> (StochasticAutomaton<Rational>, CongruenceTriple) {
        let (nx, ny, nz) = sizes;
        let kx = self.range(1, nx);
        let ky = self.range(1, ny);
        let kz = self.range(1, nz);
        let coarse = self.automaton(kx, ky, kz, full);
        let (fx, fy, fz) = (self.surjection(nx, kx), self.surjection(ny, ky), self.surjection(nz, kz));
        let a = self.refine(&coarse, sizes, (&fx, &fy, &fz), product_split);
        let c = CongruenceTriple::new(kernel_partition(&fx), kernel_partition(&fy), kernel_partition(&fz));
        (a, c)
    }

    /// An automaton with two stacked congruences: `fine` on the automaton
    /// and `coarse_on_factor`, a congruence on its factor by `fine`.
    pub fn stacked(
        &mut self,
        sizes: (usize, usize, usize),
        full: bool,
    ) -> (StochasticAutomaton<Rational>, CongruenceTriple, CongruenceTriple) {
        let (nx, ny, nz) = sizes;
        let (mx, my, mz) = (self.range(1, nx), self.range(1, ny), self.range(1, nz));
        let (kx, ky, kz) = (self.range(1, mx), self.range(1, my), self.range(1, mz));
        let top = self.automaton(kx, ky, kz, full);
        let (gx, gy, gz) = (self.surjection(mx, kx), self.surjection(my, ky), self.surjection(mz, kz));
        let middle = self.refine(&top, (mx, my, mz), (&gx, &gy, &gz), false);
        let (fx, fy, fz) = (self.surjection(nx, mx), self.surjection(ny, my), self.surjection(nz, mz));
        let a = self.refine(&middle, sizes, (&fx, &fy, &fz), false);

        let fine = CongruenceTriple::new(kernel_partition(&fx), kernel_partition(&fy), kernel_partition(&fz));
        // the factor by `fine` numbers classes by least member; translate
        // the middle-level maps into that numbering
        let on_factor =
            |fine: &Partition, f: &[usize], g: &[usize]| Partition::from_keys(fine.blocks().iter().map(|b| g[f[b[0]]]));
        let second = CongruenceTriple::new(
            on_factor(&fine.alpha, &fx, &gx),
            on_factor(&fine.beta, &fy, &gy),
            on_factor(&fine.gamma, &fz, &gz),
        );
        (a, fine, second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::is_congruence;
    use crate::factor::factor_automaton;

    #[test]
    fn a0_is_fully_probabilistic() {
        assert!(a0().is_fully_probabilistic());
    }

    #[test]
    fn generators_are_reproducible() {
        let a = Generator::new(7).automaton(3, 2, 4, false);
        let b = Generator::new(7).automaton(3, 2, 4, false);
        assert_eq!(a, b);
    }

    #[test]
    fn congruent_instances_are_congruent() {
        let mut g = Generator::new(1);
        for _ in 0..20 {
            let (a, c) = g.congruent((3, 3, 4), false, false);
            assert!(is_congruence(&a, &c).unwrap().friendly());
        }
    }

    #[test]
    fn stacked_instances_stack() {
        let mut g = Generator::new(2);
        for _ in 0..20 {
            let (a, c, c2) = g.stacked((4, 3, 4), true);
            let fr = factor_automaton(&a, &c).unwrap();
            assert!(is_congruence(fr.factor(), &c2).unwrap().friendly());
        }
    }
}
