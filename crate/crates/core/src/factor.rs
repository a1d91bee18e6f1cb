//! Factor automata and the morphisms around them.

use std::sync::Arc;

use crate::automaton::{Row, StochasticAutomaton};
use crate::congruence::{
    compose_congruences, describe_congruence_witness, is_congruence, kernel_congruence, require_congruence,
    CongruenceTriple,
};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::partition::{transport_partition, Partition};
use crate::space::FiniteSpace;
use crate::weight::Weight;

/// Label of the class whose least member is labelled `least`.
pub fn class_label(least: &str) -> String {
    format!("⟨{least}⟩")
}

/// `F/ξ` together with the factor map `η_ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    base: Arc<FiniteSpace>,
    partition: Partition,
    classes: Arc<FiniteSpace>,
}

impl QuotientSpace {
    pub fn new(base: Arc<FiniteSpace>, partition: Partition) -> Result<Self> {
        if partition.len() != base.len() {
            return Err(Error::PreconditionViolated(format!(
                "partition covers {} points, space `{}` has {}",
                partition.len(),
                base.name(),
                base.len()
            )));
        }
        let labels = partition.blocks().iter().map(|b| class_label(base.label(b[0])));
        let classes = Arc::new(FiniteSpace::new(base.name(), labels)?);
        Ok(QuotientSpace { base, partition, classes })
    }

    pub fn base(&self) -> &Arc<FiniteSpace> {
        &self.base
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn classes(&self) -> &Arc<FiniteSpace> {
        &self.classes
    }

    /// `η(e)`: the class of `e`.
    pub fn eta(&self, e: usize) -> usize {
        self.partition.class_of(e)
    }
}

/// A factor automaton with its canonical morphism from the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorResult<W: Weight> {
    factor: StochasticAutomaton<W>,
    canonical: Morphism<W>,
}

impl<W: Weight> FactorResult<W> {
    pub fn factor(&self) -> &StochasticAutomaton<W> {
        &self.factor
    }

    pub fn canonical(&self) -> &Morphism<W> {
        &self.canonical
    }

    pub fn source(&self) -> &StochasticAutomaton<W> {
        self.canonical.source()
    }

    /// Members of each factor class (preimages under the canonical maps),
    /// for inputs, outputs and states.
    pub fn class_members(&self) -> [Vec<Vec<usize>>; 3] {
        let fibres = |map: &[usize], n: usize| {
            let mut out = vec![Vec::new(); n];
            for (i, &c) in map.iter().enumerate() {
                out[c].push(i);
            }
            out
        };
        [
            fibres(self.canonical.f(), self.factor.inputs().len()),
            fibres(self.canonical.g(), self.factor.outputs().len()),
            fibres(self.canonical.h(), self.factor.states().len()),
        ]
    }
}

/// The factor automaton `K_c` on `X/α, Y/β, Z/γ`.
///
/// Each factor row is read off the least representative of its class pair
/// and re-checked against every other member of the pair.
pub fn factor_automaton<W: Weight>(a: &StochasticAutomaton<W>, c: &CongruenceTriple) -> Result<FactorResult<W>> {
    require_congruence(a, c)?;
    let qx = QuotientSpace::new(a.inputs().clone(), c.alpha.clone())?;
    let qy = QuotientSpace::new(a.outputs().clone(), c.beta.clone())?;
    let qz = QuotientSpace::new(a.states().clone(), c.gamma.clone())?;

    let push = |row: &Row<W>| row.map_keys(|&(n, y)| (qz.eta(n), qy.eta(y)));
    let mut law = Vec::with_capacity(c.alpha.num_blocks() * c.gamma.num_blocks());
    for xs in c.alpha.blocks() {
        for zs in c.gamma.blocks() {
            let row = push(a.row(xs[0], zs[0]));
            for &x in xs {
                for &z in zs {
                    if push(a.row(x, z)) != row {
                        return Err(Error::InternalConsistency(format!(
                            "factor row depends on the representative: ({},{})",
                            a.inputs().label(x),
                            a.states().label(z)
                        )));
                    }
                }
            }
            law.push(row);
        }
    }
    let factor = StochasticAutomaton::new(qx.classes().clone(), qy.classes().clone(), qz.classes().clone(), law)?;
    let canonical = Morphism::new(
        a.clone(),
        factor.clone(),
        c.alpha.class_map().to_vec(),
        c.beta.class_map().to_vec(),
        c.gamma.class_map().to_vec(),
    )
    .map_err(internal("canonical factor map"))?;
    Ok(FactorResult { factor, canonical })
}

fn internal(what: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::InternalConsistency(format!("{what}: {e}"))
}

/// Factorization `m = mono ∘ canonical` through the kernel factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmFactorization<W: Weight> {
    /// `η_{Kern m}` onto the kernel factor.
    pub canonical: Morphism<W>,
    /// The induced morphism from the kernel factor; injective components.
    pub mono: Morphism<W>,
}

pub fn em_factorization<W: Weight>(m: &Morphism<W>) -> Result<EmFactorization<W>> {
    let kernel = kernel_congruence(m)?;
    let factored = factor_automaton(m.source(), &kernel)?;
    let induced = |p: &Partition, map: &[usize]| -> Vec<usize> { p.blocks().iter().map(|b| map[b[0]]).collect() };
    let mono = Morphism::new(
        factored.factor.clone(),
        m.target().clone(),
        induced(&kernel.alpha, m.f()),
        induced(&kernel.beta, m.g()),
        induced(&kernel.gamma, m.h()),
    )
    .map_err(internal("induced morphism"))?;
    let canonical = factored.canonical;
    if !mono.is_injective() || !canonical.then(&mono)?.same_maps(m) {
        return Err(Error::InternalConsistency("em-factorization does not reproduce the morphism".into()));
    }
    Ok(EmFactorization { canonical, mono })
}

/// The two ways of factoring twice, and the isomorphism between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refactoring<W: Weight> {
    /// `c ∗ c'` on the base automaton.
    pub lifted: CongruenceTriple,
    /// Factor of the base by `c ∗ c'`.
    pub direct: FactorResult<W>,
    /// Factor of the `c`-factor by `c'`.
    pub iterated: FactorResult<W>,
    /// `⟦x⟧_{α∗α'} ↦ ⟦⟦x⟧_α⟧_{α'}` and its companions on outputs and states.
    pub forward: Morphism<W>,
    pub backward: Morphism<W>,
}

pub fn refactor_isomorphism<W: Weight>(
    a: &StochasticAutomaton<W>,
    c: &CongruenceTriple,
    c_prime: &CongruenceTriple,
) -> Result<Refactoring<W>> {
    let first = factor_automaton(a, c)?;
    let iterated = factor_automaton(first.factor(), c_prime)?;
    let lifted = compose_congruences(a, c, c_prime)?;
    let direct = factor_automaton(a, &lifted)?;

    // ⟦x⟧_{ξ∗ζ} ↦ ⟦⟦x⟧_ξ⟧_ζ, read off the least member
    let down = |lift: &Partition, inner: &Partition, outer: &Partition| -> Vec<usize> {
        lift.blocks().iter().map(|b| outer.class_of(inner.class_of(b[0]))).collect()
    };
    // ⟦⟦x⟧_ξ⟧_ζ ↦ ⟦x⟧_{ξ∗ζ}
    let up = |lift: &Partition, inner: &Partition, outer: &Partition| -> Vec<usize> {
        outer.blocks().iter().map(|b| lift.class_of(inner.block(b[0])[0])).collect()
    };
    let forward = Morphism::new(
        direct.factor().clone(),
        iterated.factor().clone(),
        down(&lifted.alpha, &c.alpha, &c_prime.alpha),
        down(&lifted.beta, &c.beta, &c_prime.beta),
        down(&lifted.gamma, &c.gamma, &c_prime.gamma),
    )
    .map_err(internal("forward isomorphism"))?;
    let backward = Morphism::new(
        iterated.factor().clone(),
        direct.factor().clone(),
        up(&lifted.alpha, &c.alpha, &c_prime.alpha),
        up(&lifted.beta, &c.beta, &c_prime.beta),
        up(&lifted.gamma, &c.gamma, &c_prime.gamma),
    )
    .map_err(internal("backward isomorphism"))?;
    if !forward.then(&backward)?.is_identity() || !backward.then(&forward)?.is_identity() {
        return Err(Error::InternalConsistency("refactoring maps are not mutually inverse".into()));
    }
    Ok(Refactoring { lifted, direct, iterated, forward, backward })
}

/// Which components a stepwise reduction factors first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionOrder {
    /// `(1, 1, γ)` then `(α, β, 1)`.
    StatesFirst,
    /// `(α, β, 1)` then `(1, 1, γ)`.
    IoFirst,
}

/// Result of [`stepwise_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepwiseReduction<W: Weight> {
    pub stage_one_triple: CongruenceTriple,
    pub stage_two_triple: CongruenceTriple,
    pub stage_one: FactorResult<W>,
    /// The final automaton, with the composite canonical morphism from the
    /// original automaton.
    pub result: FactorResult<W>,
    /// Isomorphism from the final automaton onto the direct factor by `c`.
    pub to_direct: Morphism<W>,
}

/// Factors by `c` in two stages, splitting it into a state part and an
/// input/output part.
pub fn stepwise_reduction<W: Weight>(
    a: &StochasticAutomaton<W>,
    c: &CongruenceTriple,
    order: ReductionOrder,
) -> Result<StepwiseReduction<W>> {
    require_congruence(a, c)?;
    let (nx, ny, nz) = (a.inputs().len(), a.outputs().len(), a.states().len());
    let stage_one_triple = match order {
        ReductionOrder::StatesFirst => {
            CongruenceTriple::new(Partition::discrete(nx), Partition::discrete(ny), c.gamma.clone())
        }
        ReductionOrder::IoFirst => CongruenceTriple::new(c.alpha.clone(), c.beta.clone(), Partition::discrete(nz)),
    };
    let stage_one = factor_automaton(a, &stage_one_triple).map_err(|e| stage_failure(1, e))?;

    let mid = stage_one.factor();
    let eta = stage_one.canonical();
    let stage_two_triple = match order {
        ReductionOrder::StatesFirst => CongruenceTriple::new(
            transport_partition(&c.alpha, eta.f(), mid.inputs().len())?,
            transport_partition(&c.beta, eta.g(), mid.outputs().len())?,
            Partition::discrete(mid.states().len()),
        ),
        ReductionOrder::IoFirst => CongruenceTriple::new(
            Partition::discrete(mid.inputs().len()),
            Partition::discrete(mid.outputs().len()),
            transport_partition(&c.gamma, eta.h(), mid.states().len())?,
        ),
    };
    if let Some(w) = is_congruence(mid, &stage_two_triple)?.witness {
        return Err(Error::StageDecompositionFailed {
            stage: 2,
            witness: describe_congruence_witness(mid, &stage_two_triple, &w),
        });
    }
    let stage_two = factor_automaton(mid, &stage_two_triple)?;

    let refactoring = refactor_isomorphism(a, &stage_one_triple, &stage_two_triple)?;
    if &refactoring.lifted != c {
        return Err(Error::InternalConsistency("stage triples do not lift back to the congruence".into()));
    }
    let result =
        FactorResult { factor: stage_two.factor.clone(), canonical: stage_one.canonical.then(&stage_two.canonical)? };
    Ok(StepwiseReduction { stage_one_triple, stage_two_triple, stage_one, result, to_direct: refactoring.backward })
}

fn stage_failure(stage: u8, e: Error) -> Error {
    match e {
        Error::NotACongruence(witness) => Error::StageDecompositionFailed { stage, witness },
        other => other,
    }
}
