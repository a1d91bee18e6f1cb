//! Sequential behaviour: input words, black-box output laws, cylinder
//! probabilities of eventually periodic input streams, and prefix trees.

use crate::automaton::StochasticAutomaton;
use crate::congruence::{friendship, require_congruence, CongruenceTriple, FriendshipReport};
use crate::distribution::SubDistribution;
use crate::error::{Error, Result};
use crate::partition::{Power, Rect};
use crate::weight::Weight;

pub use crate::partition::power_partition;

/// A word of letter indices.
pub type Word = Vec<usize>;

/// A distribution over states (initial distributions included).
pub type StateDistribution<W> = SubDistribution<usize, W>;

/// Law of the output word and final state after feeding a whole input word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDistribution<W: Weight> {
    length: usize,
    support: SubDistribution<(usize, Word), W>,
}

impl<W: Weight> WordDistribution<W> {
    pub fn length(&self) -> usize {
        self.length
    }

    /// Joint law of `(final state, output word)`.
    pub fn joint(&self) -> &SubDistribution<(usize, Word), W> {
        &self.support
    }

    /// Output word law with the final state summed out.
    pub fn outputs(&self) -> SubDistribution<Word, W> {
        self.support.map_keys(|(_, w)| w.clone())
    }

    pub fn mass(&self) -> W {
        self.support.mass()
    }
}

fn check_word<W: Weight>(a: &StochasticAutomaton<W>, v: &[usize]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::PreconditionViolated("input word must be nonempty".into()));
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= a.inputs().len()) {
        return Err(Error::MalformedInput(format!("letter {bad} is not an input")));
    }
    Ok(())
}

fn check_states<W: Weight>(a: &StochasticAutomaton<W>, mu: &StateDistribution<W>) -> Result<()> {
    if let Some(&bad) = mu.support().find(|&&z| z >= a.states().len()) {
        return Err(Error::MalformedInput(format!("state {bad} is not a state")));
    }
    Ok(())
}

/// Feeds `v` letter by letter: `L(z'', w·y) = Σ_{z'} L(z', w) · K(x, z')(z'', y)`.
fn propagate<W: Weight>(
    a: &StochasticAutomaton<W>,
    mut current: SubDistribution<(usize, Word), W>,
    v: &[usize],
) -> SubDistribution<(usize, Word), W> {
    for &x in v {
        let mut next = SubDistribution::zero();
        for ((z, w), p) in current.iter() {
            for (&(n, y), q) in a.row(x, *z).iter() {
                let mut word = w.clone();
                word.push(y);
                next.add_weight((n, word), p.clone() * q.clone());
            }
        }
        current = next;
    }
    current
}

/// The extended transition law `K(v, z)` on `Z × Y^{|v|}`.
pub fn extend_word<W: Weight>(a: &StochasticAutomaton<W>, v: &[usize], z: usize) -> Result<WordDistribution<W>> {
    check_word(a, v)?;
    if z >= a.states().len() {
        return Err(Error::MalformedInput(format!("state {z} is not a state")));
    }
    Ok(WordDistribution { length: v.len(), support: propagate(a, SubDistribution::point((z, Vec::new())), v) })
}

/// `K^n_μ(v)`: output words of length `|v|` with the states hidden.
pub fn word_behavior<W: Weight>(
    a: &StochasticAutomaton<W>,
    mu: &StateDistribution<W>,
    v: &[usize],
) -> Result<SubDistribution<Word, W>> {
    check_word(a, v)?;
    check_states(a, mu)?;
    let start = mu.map_keys(|&z| (z, Vec::new()));
    Ok(propagate(a, start, v).map_keys(|(_, w)| w.clone()))
}

/// The black box `K^+_μ` evaluated at a word of any positive length; the
/// result lives on `Y^{|v|}`.
pub fn black_box<W: Weight>(
    a: &StochasticAutomaton<W>,
    mu: &StateDistribution<W>,
    v: &[usize],
) -> Result<SubDistribution<Word, W>> {
    word_behavior(a, mu, v)
}

/// Marginal of a word law onto the first `n` letters.
pub fn truncate_words<W: Weight>(d: &SubDistribution<Word, W>, n: usize) -> SubDistribution<Word, W> {
    d.map_keys(|w| w[..n.min(w.len())].to_vec())
}

/// An input word `prefix · period^ω`, or the finite word `prefix` when the
/// period is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StreamPresentation {
    pub prefix: Word,
    pub period: Word,
}

impl StreamPresentation {
    pub fn finite(word: Word) -> Self {
        StreamPresentation { prefix: word, period: Vec::new() }
    }

    pub fn periodic(prefix: Word, period: Word) -> Self {
        StreamPresentation { prefix, period }
    }

    pub fn is_infinite(&self) -> bool {
        !self.period.is_empty()
    }

    /// Length of the denoted word, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        (!self.is_infinite()).then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Letter at position `i`, if the word is that long.
    pub fn letter(&self, i: usize) -> Option<usize> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.is_infinite() {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        } else {
            None
        }
    }

    /// `τ_n`, the first `n` letters, if the word is that long.
    pub fn truncate(&self, n: usize) -> Option<Word> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// Length up to which two presentations must agree to be equal (for
    /// infinite words) or prefix-comparable.
    fn horizon(&self, other: &Self) -> usize {
        match (self.len(), other.len()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => {
                let lcm = num_integer::lcm(self.period.len(), other.period.len());
                self.prefix.len() + other.prefix.len() + lcm
            }
        }
    }

    fn agrees_with(&self, other: &Self) -> bool {
        (0..self.horizon(other)).all(|i| self.letter(i) == other.letter(i))
    }

    /// Denotes the same word.
    pub fn same_word(&self, other: &Self) -> bool {
        self.len() == other.len() && self.agrees_with(other)
    }

    /// `v` is a prefix of the denoted word.
    pub fn has_prefix(&self, v: &[usize]) -> bool {
        v.iter().enumerate().all(|(i, &x)| self.letter(i) == Some(x))
    }
}

/// `μ` must have mass one and every row of `a` mass one.
fn require_full_probability<W: Weight>(a: &StochasticAutomaton<W>, mu: &StateDistribution<W>) -> Result<()> {
    if !a.is_fully_probabilistic() {
        return Err(Error::FullProbabilityRequired("every row needs K(x,z)(Z×Y) = 1".into()));
    }
    if !mu.mass().is_one() {
        return Err(Error::FullProbabilityRequired(format!(
            "initial distribution has mass {}",
            mu.mass().to_fraction_string()
        )));
    }
    Ok(())
}

/// Probability of the cylinder `G × Y^∞` under the stream semantics of
/// `a` from `μ` on input `tau`, which only depends on `τ_n`.
pub fn cylinder_probability<W: Weight>(
    a: &StochasticAutomaton<W>,
    mu: &StateDistribution<W>,
    tau: &StreamPresentation,
    n: usize,
    words: &[Word],
) -> Result<W> {
    require_full_probability(a, mu)?;
    let prefix = tau
        .truncate(n)
        .ok_or_else(|| Error::PreconditionViolated(format!("input stream is shorter than depth {n}")))?;
    if let Some(w) = words.iter().find(|w| w.len() != n) {
        return Err(Error::MalformedInput(format!("output word of length {} in a depth-{n} cylinder", w.len())));
    }
    if let Some(&bad) = words.iter().flatten().find(|&&y| y >= a.outputs().len()) {
        return Err(Error::MalformedInput(format!("letter {bad} is not an output")));
    }
    let law = word_behavior(a, mu, &prefix)?;
    let set: std::collections::BTreeSet<&Word> = words.iter().collect();
    Ok(law.measure(|w| set.contains(w)))
}

/// A prefix-free set of input paths, finite or eventually periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTree {
    paths: Vec<StreamPresentation>,
}

impl PrefixTree {
    /// Rejects an empty path and any path that is a proper prefix of
    /// another. Repeated paths are kept once.
    pub fn new(paths: Vec<StreamPresentation>) -> Result<Self> {
        let mut kept: Vec<StreamPresentation> = Vec::new();
        for p in paths {
            if p.is_empty() {
                return Err(Error::MalformedInput("tree contains the empty path".into()));
            }
            if kept.iter().any(|k| k.same_word(&p)) {
                continue;
            }
            if kept.iter().any(|k| k.agrees_with(&p)) {
                return Err(Error::MalformedInput(
                    "tree is not prefix free: one path is a proper prefix of another".into(),
                ));
            }
            kept.push(p);
        }
        Ok(PrefixTree { paths: kept })
    }

    pub fn paths(&self) -> &[StreamPresentation] {
        &self.paths
    }

    /// Indices of the paths having `v` as a prefix.
    pub fn containing(&self, v: &[usize]) -> Vec<usize> {
        (0..self.paths.len()).filter(|&i| self.paths[i].has_prefix(v)).collect()
    }
}

/// `T(v)` computed along one particular path: the behaviour along the whole
/// path (its `|v|`-truncation when infinite) marginalized to `|v|` letters.
pub fn decorate_along<W: Weight>(
    a: &StochasticAutomaton<W>,
    mu: &StateDistribution<W>,
    path: &StreamPresentation,
    v: &[usize],
) -> Result<SubDistribution<Word, W>> {
    require_full_probability(a, mu)?;
    if !path.has_prefix(v) {
        return Err(Error::NotInTree("word is not a prefix of the path".into()));
    }
    let full = match path.len() {
        Some(_) => path.prefix.clone(),
        None => path.truncate(v.len()).expect("infinite path"),
    };
    Ok(truncate_words(&word_behavior(a, mu, &full)?, v.len()))
}

/// The decoration `T(v)` of a tree node: the law of the first `|v|` output
/// letters along any path through `v`.
pub fn decorate_tree<W: Weight>(
    a: &StochasticAutomaton<W>,
    mu: &StateDistribution<W>,
    tree: &PrefixTree,
    v: &[usize],
) -> Result<SubDistribution<Word, W>> {
    require_full_probability(a, mu)?;
    check_word(a, v)?;
    let first =
        *tree.containing(v).first().ok_or_else(|| Error::NotInTree("no path of the tree extends the word".into()))?;
    decorate_along(a, mu, &tree.paths[first], v)
}

/// `T(v)(Y^{n-1} × G₀)`: probability that the last output letter at node
/// `v` lies in `last_letters`.
pub fn leaf_output<W: Weight>(decoration: &SubDistribution<Word, W>, last_letters: &[usize]) -> W {
    decoration.measure(|w| w.last().is_some_and(|y| last_letters.contains(y)))
}

/// Both power-friendship checks at one word length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFriendship<W: Weight> {
    pub length: usize,
    /// `αⁿ × γ` friendly to `γ × βⁿ` for the extended law.
    pub extended: FriendshipReport<(Word, usize), (usize, Word), W>,
    /// `αⁿ` friendly to `βⁿ` for the black box at the given `μ`.
    pub black_box: Option<FriendshipReport<Word, Word, W>>,
}

impl<W: Weight> PowerFriendship<W> {
    pub fn friendly(&self) -> bool {
        self.extended.friendly() && self.black_box.as_ref().is_none_or(|r| r.friendly())
    }
}

/// All words of length `n` over `0..k`, lexicographically.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Checks that a congruence stays friendly on words of length `n`.
pub fn check_power_friendship<W: Weight>(
    a: &StochasticAutomaton<W>,
    c: &CongruenceTriple,
    n: usize,
    mu: Option<&StateDistribution<W>>,
) -> Result<PowerFriendship<W>> {
    if n == 0 {
        return Err(Error::PreconditionViolated("word length must be at least one".into()));
    }
    require_congruence(a, c)?;
    let words = all_words(a.inputs().len(), n);

    let mut rows = Vec::with_capacity(words.len() * a.states().len());
    for v in &words {
        for z in 0..a.states().len() {
            rows.push(((v.clone(), z), extend_word(a, v, z)?.support));
        }
    }
    let extended = friendship(
        rows.iter().map(|(k, d)| (k.clone(), d)),
        &Rect(Power(&c.alpha), &c.gamma),
        &Rect(&c.gamma, Power(&c.beta)),
    );

    let black_box = match mu {
        None => None,
        Some(mu) => {
            let laws = words.iter().map(|v| Ok((v.clone(), word_behavior(a, mu, v)?))).collect::<Result<Vec<_>>>()?;
            Some(friendship(laws.iter().map(|(v, d)| (v.clone(), d)), &Power(&c.alpha), &Power(&c.beta)))
        }
    };
    Ok(PowerFriendship { length: n, extended, black_box })
}
