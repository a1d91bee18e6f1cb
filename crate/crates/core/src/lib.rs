//! Exact congruence theory for finite stochastic Mealy automata.
//!
//! An automaton `K: X × Z ⇒ Z × Y` assigns every input/state pair a
//! subprobability over next states and outputs. This crate checks when
//! triples of equivalence relations on inputs, outputs and states are
//! congruences, computes coarsest state congruences, builds factor automata
//! with their canonical morphisms, evaluates word and stream semantics, and
//! decides friendship of randomized relations. All arithmetic is exact.
//!
//! The core is generic over the scalar via [`Weight`]; the aliases below fix
//! it to arbitrary-precision rationals, which is what the file formats and
//! the command line use.

pub mod automaton;
pub mod cli;
pub mod congruence;
pub mod distribution;
pub mod error;
pub mod factor;
pub mod io;
pub mod morphism;
pub mod partition;
pub mod randomization;
pub mod space;
pub mod streams;
pub mod testing;
pub mod weight;

pub use automaton::{validate_automaton, RawAutomaton, Row, StochasticAutomaton, Violation};
pub use congruence::{
    coarsest_state_congruence, compose_congruences, invariant_mass, is_congruence, is_friendly, kernel_congruence,
    CongruenceTriple, FriendshipReport, FriendshipWitness,
};
pub use distribution::SubDistribution;
pub use error::{Error, Result};
pub use factor::{
    em_factorization, factor_automaton, refactor_isomorphism, stepwise_reduction, FactorResult, QuotientSpace,
    ReductionOrder,
};
pub use morphism::{is_morphism, Morphism};
pub use partition::{kernel_partition, lift_partition, power_partition, product_partition, Partition};
pub use randomization::{is_random_friend, kleisli_extension, rnd_equivalent};
pub use space::FiniteSpace;
pub use streams::{
    black_box, check_power_friendship, cylinder_probability, decorate_tree, extend_word, word_behavior, PrefixTree,
    StreamPresentation, Word, WordDistribution,
};
pub use weight::Weight;

/// Arbitrary-precision exact rational.
pub type Rational = num_rational::BigRational;

/// Automaton over [`Rational`] weights.
pub type Automaton = StochasticAutomaton<Rational>;

/// Subprobability over [`Rational`] weights.
pub type Distribution<K = usize> = SubDistribution<K, Rational>;

/// Morphism of [`Automaton`]s.
pub type AutomatonMorphism = Morphism<Rational>;

/// Factor automaton over [`Rational`] weights.
pub type Factor = FactorResult<Rational>;
