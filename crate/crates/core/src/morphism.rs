//! Morphisms between stochastic automata.

use crate::automaton::StochasticAutomaton;
use crate::error::{Error, Result};
use crate::weight::Weight;

/// The first singleton `{(z', y')}` of the target on which the morphism
/// diagram fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCounterexample<W> {
    pub input: usize,
    pub state: usize,
    /// `(z', y')` in the target.
    pub target_pair: (usize, usize),
    /// `K'(f(x), h(z))({(z', y')})`.
    pub target_mass: W,
    /// `K(x, z)((h × g)⁻¹{(z', y')})`.
    pub source_mass: W,
}

/// Outcome of [`is_morphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCheck<W> {
    pub counterexample: Option<DiagramCounterexample<W>>,
}

impl<W> MorphismCheck<W> {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub(crate) fn is_surjective(map: &[usize], codomain: usize) -> bool {
    let mut hit = vec![false; codomain];
    for &m in map {
        if m >= codomain {
            return false;
        }
        hit[m] = true;
    }
    hit.into_iter().all(|h| h)
}

fn check_component(name: &str, map: &[usize], domain: usize, codomain: usize) -> Result<()> {
    if map.len() != domain {
        return Err(Error::PreconditionViolated(format!(
            "{name} is defined on {} points, the domain has {domain}",
            map.len()
        )));
    }
    if !is_surjective(map, codomain) {
        return Err(Error::PreconditionViolated(format!("{name} is not onto its target")));
    }
    Ok(())
}

/// Checks the morphism diagram `K'(f(x), h(z)) = S(h × g)(K(x, z))` on every
/// singleton of the target, which suffices on finite spaces.
pub fn is_morphism<W: Weight>(
    source: &StochasticAutomaton<W>,
    target: &StochasticAutomaton<W>,
    f: &[usize],
    g: &[usize],
    h: &[usize],
) -> Result<MorphismCheck<W>> {
    check_component("f", f, source.inputs().len(), target.inputs().len())?;
    check_component("g", g, source.outputs().len(), target.outputs().len())?;
    check_component("h", h, source.states().len(), target.states().len())?;

    for ((x, z), row) in source.rows() {
        let pushed = row.map_keys(|&(n, y)| (h[n], g[y]));
        let expected = target.row(f[x], h[z]);
        if let Some((pair, target_mass, source_mass)) = expected.first_difference(&pushed) {
            return Ok(MorphismCheck {
                counterexample: Some(DiagramCounterexample {
                    input: x,
                    state: z,
                    target_pair: pair,
                    target_mass,
                    source_mass,
                }),
            });
        }
    }
    Ok(MorphismCheck { counterexample: None })
}

/// A validated morphism `(f, g, h)` from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<W: Weight> {
    source: StochasticAutomaton<W>,
    target: StochasticAutomaton<W>,
    f: Vec<usize>,
    g: Vec<usize>,
    h: Vec<usize>,
}

impl<W: Weight> Morphism<W> {
    pub fn new(
        source: StochasticAutomaton<W>,
        target: StochasticAutomaton<W>,
        f: Vec<usize>,
        g: Vec<usize>,
        h: Vec<usize>,
    ) -> Result<Self> {
        let check = is_morphism(&source, &target, &f, &g, &h)?;
        if let Some(cx) = check.counterexample {
            return Err(Error::NotAMorphism(describe_counterexample(&source, &target, &cx)));
        }
        Ok(Morphism { source, target, f, g, h })
    }

    pub fn identity(a: &StochasticAutomaton<W>) -> Self {
        let f = (0..a.inputs().len()).collect();
        let g = (0..a.outputs().len()).collect();
        let h = (0..a.states().len()).collect();
        Morphism { source: a.clone(), target: a.clone(), f, g, h }
    }

    pub fn source(&self) -> &StochasticAutomaton<W> {
        &self.source
    }

    pub fn target(&self) -> &StochasticAutomaton<W> {
        &self.target
    }

    /// Input component.
    pub fn f(&self) -> &[usize] {
        &self.f
    }

    /// Output component.
    pub fn g(&self) -> &[usize] {
        &self.g
    }

    /// State component.
    pub fn h(&self) -> &[usize] {
        &self.h
    }

    /// `next ∘ self`, componentwise. The target of `self` must equal the
    /// source of `next`.
    pub fn then(&self, next: &Morphism<W>) -> Result<Morphism<W>> {
        if self.target != next.source {
            return Err(Error::PreconditionViolated("morphisms are not composable: target and source differ".into()));
        }
        let compose = |a: &[usize], b: &[usize]| a.iter().map(|&i| b[i]).collect::<Vec<_>>();
        Ok(Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            f: compose(&self.f, &next.f),
            g: compose(&self.g, &next.g),
            h: compose(&self.h, &next.h),
        })
    }

    /// All three components are injective (hence bijective).
    pub fn is_injective(&self) -> bool {
        [&self.f, &self.g, &self.h].iter().all(|m| {
            let mut seen = std::collections::HashSet::new();
            m.iter().all(|i| seen.insert(*i))
        })
    }

    /// Same components and endpoints.
    pub fn same_maps(&self, other: &Morphism<W>) -> bool {
        self.f == other.f && self.g == other.g && self.h == other.h
    }

    /// Component maps are identities (on equal spaces).
    pub fn is_identity(&self) -> bool {
        let id = |m: &[usize]| m.iter().enumerate().all(|(i, &j)| i == j);
        self.source == self.target && id(&self.f) && id(&self.g) && id(&self.h)
    }
}

pub(crate) fn describe_counterexample<W: Weight>(
    source: &StochasticAutomaton<W>,
    target: &StochasticAutomaton<W>,
    cx: &DiagramCounterexample<W>,
) -> String {
    format!(
        "at ({},{}) target mass of ({},{}) is {} but the source pushes {}",
        source.inputs().label(cx.input),
        source.states().label(cx.state),
        target.states().label(cx.target_pair.0),
        target.outputs().label(cx.target_pair.1),
        cx.target_mass.to_fraction_string(),
        cx.source_mass.to_fraction_string(),
    )
}
