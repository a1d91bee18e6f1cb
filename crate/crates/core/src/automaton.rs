//! Finite stochastic Mealy automata.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::distribution::SubDistribution;
use crate::error::{Error, Result};
use crate::space::FiniteSpace;
use crate::weight::Weight;

/// One row of the transition law: a subprobability over `(next state, output)`.
pub type Row<W> = SubDistribution<(usize, usize), W>;

/// A stochastic automaton `(X, Y, Z, K)` with `K: X × Z ⇒ Z × Y`.
///
/// The law is stored densely, one [`Row`] per `(input, state)` pair in
/// row-major order, and is valid by construction: every row exists, lives
/// on `Z × Y`, and has mass at most one. Cloning is cheap; spaces and law
/// are shared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticAutomaton<W: Weight> {
    inputs: Arc<FiniteSpace>,
    outputs: Arc<FiniteSpace>,
    states: Arc<FiniteSpace>,
    law: Arc<[Row<W>]>,
}

impl<W: Weight> StochasticAutomaton<W> {
    /// `law[x * |Z| + z]` is the row for input `x` in state `z`.
    pub fn new(
        inputs: Arc<FiniteSpace>,
        outputs: Arc<FiniteSpace>,
        states: Arc<FiniteSpace>,
        law: Vec<Row<W>>,
    ) -> Result<Self> {
        let expected = inputs.len() * states.len();
        if law.len() != expected {
            return Err(Error::MalformedInput(format!("law has {} rows, expected {expected}", law.len())));
        }
        for (i, row) in law.iter().enumerate() {
            let (x, z) = (i / states.len(), i % states.len());
            let at = || format!("({},{})", inputs.label(x), states.label(z));
            if row.support().any(|&(n, y)| n >= states.len() || y >= outputs.len()) {
                return Err(Error::MalformedInput(format!("row {} leaves Z × Y", at())));
            }
            if row.iter().any(|(_, w)| w.is_negative()) {
                return Err(Error::MalformedInput(format!("row {} has a negative weight", at())));
            }
            if row.mass() > W::one() {
                return Err(Error::MalformedInput(format!("row {} has mass above one", at())));
            }
        }
        Ok(StochasticAutomaton { inputs, outputs, states, law: law.into() })
    }

    /// Builds the law from a closure over `(input, state)` indices.
    pub fn from_fn(
        inputs: Arc<FiniteSpace>,
        outputs: Arc<FiniteSpace>,
        states: Arc<FiniteSpace>,
        mut row: impl FnMut(usize, usize) -> Row<W>,
    ) -> Result<Self> {
        let mut law = Vec::with_capacity(inputs.len() * states.len());
        for x in 0..inputs.len() {
            for z in 0..states.len() {
                law.push(row(x, z));
            }
        }
        Self::new(inputs, outputs, states, law)
    }

    pub fn inputs(&self) -> &Arc<FiniteSpace> {
        &self.inputs
    }

    pub fn outputs(&self) -> &Arc<FiniteSpace> {
        &self.outputs
    }

    pub fn states(&self) -> &Arc<FiniteSpace> {
        &self.states
    }

    pub fn row(&self, input: usize, state: usize) -> &Row<W> {
        &self.law[input * self.states.len() + state]
    }

    /// All rows keyed by `(input, state)`, in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = ((usize, usize), &Row<W>)> {
        let n = self.states.len();
        self.law.iter().enumerate().map(move |(i, r)| ((i / n, i % n), r))
    }

    /// Every row has mass exactly one.
    pub fn is_fully_probabilistic(&self) -> bool {
        self.law.iter().all(|r| r.mass().is_one())
    }

    /// Converts back to the label-level description.
    pub fn to_raw(&self) -> RawAutomaton<W> {
        let law = self
            .rows()
            .map(|((x, z), row)| RawRow {
                input: self.inputs.label(x).to_string(),
                state: self.states.label(z).to_string(),
                moves: row
                    .iter()
                    .map(|(&(n, y), p)| RawMove {
                        next: self.states.label(n).to_string(),
                        out: self.outputs.label(y).to_string(),
                        p: p.clone(),
                    })
                    .collect(),
            })
            .collect();
        RawAutomaton {
            inputs: self.inputs.labels().to_vec(),
            outputs: self.outputs.labels().to_vec(),
            states: self.states.labels().to_vec(),
            law,
        }
    }
}

/// Label-level automaton description, as read from a file. It may violate
/// any invariant; [`validate_automaton`] lists what is wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAutomaton<W> {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub states: Vec<String>,
    pub law: Vec<RawRow<W>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRow<W> {
    pub input: String,
    pub state: String,
    pub moves: Vec<RawMove<W>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawMove<W> {
    pub next: String,
    pub out: String,
    pub p: W,
}

/// One reason a [`RawAutomaton`] is not a valid automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptySpace { space: &'static str },
    DuplicateLabel { space: &'static str, label: String },
    UnknownLabel { space: &'static str, label: String, row: String },
    DuplicateRow { input: String, state: String },
    MissingRow { input: String, state: String },
    DuplicateMove { input: String, state: String, next: String, out: String },
    NegativeWeight { input: String, state: String, next: String, out: String, p: String },
    MassExceedsOne { input: String, state: String, mass: String },
}

impl Violation {
    /// Stable kebab-case identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::EmptySpace { .. } => "empty-space",
            Violation::DuplicateLabel { .. } => "duplicate-label",
            Violation::UnknownLabel { .. } => "unknown-label",
            Violation::DuplicateRow { .. } => "duplicate-row",
            Violation::MissingRow { .. } => "missing-row",
            Violation::DuplicateMove { .. } => "duplicate-move",
            Violation::NegativeWeight { .. } => "negative-weight",
            Violation::MassExceedsOne { .. } => "mass-exceeds-one",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = self.code();
        match self {
            Violation::EmptySpace { space } => write!(f, "{code}: {space}"),
            Violation::DuplicateLabel { space, label } => write!(f, "{code}: `{label}` in {space}"),
            Violation::UnknownLabel { space, label, row } => {
                write!(f, "{code}: `{label}` is not in {space} (row {row})")
            }
            Violation::DuplicateRow { input, state } | Violation::MissingRow { input, state } => {
                write!(f, "{code} ({input},{state})")
            }
            Violation::DuplicateMove { input, state, next, out } => {
                write!(f, "{code} ({next},{out}) at ({input},{state})")
            }
            Violation::NegativeWeight { input, state, next, out, p } => {
                write!(f, "{code} {p} for ({next},{out}) at ({input},{state})")
            }
            Violation::MassExceedsOne { input, state, mass } => {
                write!(f, "{code} at ({input},{state}): mass {mass}")
            }
        }
    }
}

/// Lists every invariant violation of a raw automaton description; empty
/// iff [`RawAutomaton::build`] succeeds.
pub fn validate_automaton<W: Weight>(raw: &RawAutomaton<W>) -> Vec<Violation> {
    let mut out = Vec::new();
    let inputs = check_labels("inputs", &raw.inputs, &mut out);
    let outputs = check_labels("outputs", &raw.outputs, &mut out);
    let states = check_labels("states", &raw.states, &mut out);

    let mut seen_rows = HashSet::new();
    for row in &raw.law {
        let name = format!("({},{})", row.input, row.state);
        let mut known = true;
        for (space, set, label) in [("inputs", &inputs, &row.input), ("states", &states, &row.state)] {
            if !set.contains(label.as_str()) {
                known = false;
                out.push(Violation::UnknownLabel { space, label: label.clone(), row: name.clone() });
            }
        }
        if known && !seen_rows.insert((row.input.as_str(), row.state.as_str())) {
            out.push(Violation::DuplicateRow { input: row.input.clone(), state: row.state.clone() });
        }

        let mut seen_moves = HashSet::new();
        let mut mass = W::zero();
        for mv in &row.moves {
            for (space, set, label) in [("states", &states, &mv.next), ("outputs", &outputs, &mv.out)] {
                if !set.contains(label.as_str()) {
                    out.push(Violation::UnknownLabel { space, label: label.clone(), row: name.clone() });
                }
            }
            if !seen_moves.insert((mv.next.as_str(), mv.out.as_str())) {
                out.push(Violation::DuplicateMove {
                    input: row.input.clone(),
                    state: row.state.clone(),
                    next: mv.next.clone(),
                    out: mv.out.clone(),
                });
            }
            if mv.p.is_negative() {
                out.push(Violation::NegativeWeight {
                    input: row.input.clone(),
                    state: row.state.clone(),
                    next: mv.next.clone(),
                    out: mv.out.clone(),
                    p: mv.p.to_fraction_string(),
                });
            } else {
                mass = mass + mv.p.clone();
            }
        }
        if mass > W::one() {
            out.push(Violation::MassExceedsOne {
                input: row.input.clone(),
                state: row.state.clone(),
                mass: mass.to_fraction_string(),
            });
        }
    }

    for x in &raw.inputs {
        for z in &raw.states {
            if !seen_rows.contains(&(x.as_str(), z.as_str()))
                && inputs.contains(x.as_str())
                && states.contains(z.as_str())
            {
                out.push(Violation::MissingRow { input: x.clone(), state: z.clone() });
            }
        }
    }
    out
}

fn check_labels<'a>(space: &'static str, labels: &'a [String], out: &mut Vec<Violation>) -> HashSet<&'a str> {
    if labels.is_empty() {
        out.push(Violation::EmptySpace { space });
    }
    let mut set = HashSet::new();
    for l in labels {
        if !set.insert(l.as_str()) {
            out.push(Violation::DuplicateLabel { space, label: l.clone() });
        }
    }
    set
}

impl<W: Weight> RawAutomaton<W> {
    /// Validates and converts to an automaton.
    pub fn build(&self) -> std::result::Result<StochasticAutomaton<W>, Vec<Violation>> {
        let violations = validate_automaton(self);
        if !violations.is_empty() {
            return Err(violations);
        }
        let space = |name: &str, labels: &[String]| {
            Arc::new(FiniteSpace::new(name, labels.iter().cloned()).expect("validated"))
        };
        let inputs = space("inputs", &self.inputs);
        let outputs = space("outputs", &self.outputs);
        let states = space("states", &self.states);

        let mut rows: BTreeMap<(usize, usize), Row<W>> = BTreeMap::new();
        for row in &self.law {
            let x = inputs.index_of(&row.input).expect("validated");
            let z = states.index_of(&row.state).expect("validated");
            let dist = row
                .moves
                .iter()
                .map(|mv| {
                    let n = states.index_of(&mv.next).expect("validated");
                    let y = outputs.index_of(&mv.out).expect("validated");
                    ((n, y), mv.p.clone())
                })
                .collect();
            rows.insert((x, z), dist);
        }
        let law = rows.into_values().collect();
        Ok(StochasticAutomaton::new(inputs, outputs, states, law).expect("validated"))
    }
}
