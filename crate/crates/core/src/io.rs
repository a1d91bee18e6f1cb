//! JSON file formats and the word syntax of the command line.
//!
//! Parsers take the document text plus a source name used in diagnostics.
//! Writers produce canonical documents: rationals as `"num/den"`, rows in
//! index order, moves sorted, classes in canonical partition order, so that
//! writing a parsed document is idempotent.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::automaton::{RawAutomaton, RawMove, RawRow, StochasticAutomaton};
use crate::congruence::CongruenceTriple;
use crate::distribution::SubDistribution;
use crate::factor::FactorResult;
use crate::morphism::Morphism;
use crate::partition::Partition;
use crate::space::FiniteSpace;
use crate::streams::{PrefixTree, StreamPresentation, Word};
use crate::weight::Weight;
use crate::{Automaton, Distribution, Rational};

/// A document that could not be read as the expected type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// File path or argument name.
    pub source: String,
    /// `line L column C` for syntax errors, a field path otherwise.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.source, self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

fn fail<T>(source: &str, location: impl Into<String>, message: impl Into<String>) -> ParseResult<T> {
    Err(ParseError { source: source.to_string(), location: location.into(), message: message.into() })
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, source: &str) -> ParseResult<T> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => full,
        };
        ParseError { source: source.to_string(), location: format!("line {} column {}", e.line(), e.column()), message }
    })
}

/// Reads a whole file; an unreadable file is reported as a parse failure.
pub fn read_file(path: &Path) -> ParseResult<String> {
    std::fs::read_to_string(path).map_err(|e| ParseError {
        source: path.display().to_string(),
        location: "file".into(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("JSON values serialize");
    out.push('\n');
    out
}

fn parse_rational(text: &str, source: &str, location: &str) -> ParseResult<Rational> {
    match Rational::parse_weight(text) {
        Some(p) => Ok(p),
        None => fail(source, location, format!("`{text}` is not a rational \"num/den\"")),
    }
}

fn lookup(space: &FiniteSpace, label: &str, source: &str, location: &str) -> ParseResult<usize> {
    match space.index_of(label) {
        Some(i) => Ok(i),
        None => fail(source, location, format!("unknown-label: `{label}` is not in {}", space.name())),
    }
}

// automata

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: Vec<String>,
    law: Vec<RowDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    input: String,
    state: String,
    moves: Vec<MoveDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveDoc {
    next: String,
    out: String,
    p: String,
}

/// Reads the automaton format without checking its invariants; negative
/// weights, unknown labels and the like are left for
/// [`crate::validate_automaton`].
pub fn parse_raw_automaton(text: &str, source: &str) -> ParseResult<RawAutomaton<Rational>> {
    let doc: AutomatonDoc = from_json(text, source)?;
    let mut law = Vec::with_capacity(doc.law.len());
    for (i, row) in doc.law.into_iter().enumerate() {
        let mut moves = Vec::with_capacity(row.moves.len());
        for (j, mv) in row.moves.into_iter().enumerate() {
            let p = parse_rational(&mv.p, source, &format!("law[{i}].moves[{j}].p"))?;
            moves.push(RawMove { next: mv.next, out: mv.out, p });
        }
        law.push(RawRow { input: row.input, state: row.state, moves });
    }
    Ok(RawAutomaton { inputs: doc.inputs, outputs: doc.outputs, states: doc.states, law })
}

/// Reads and validates an automaton. Every violation is listed in the
/// diagnostic.
pub fn parse_automaton(text: &str, source: &str) -> ParseResult<Automaton> {
    let raw = parse_raw_automaton(text, source)?;
    raw.build().or_else(|violations| {
        let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        fail(source, "law", listed.join("; "))
    })
}

pub fn automaton_value<W: Weight>(a: &StochasticAutomaton<W>) -> Value {
    let raw = a.to_raw();
    let doc = AutomatonDoc {
        inputs: raw.inputs,
        outputs: raw.outputs,
        states: raw.states,
        law: raw
            .law
            .into_iter()
            .map(|r| RowDoc {
                input: r.input,
                state: r.state,
                moves: r
                    .moves
                    .into_iter()
                    .map(|m| MoveDoc { next: m.next, out: m.out, p: m.p.to_fraction_string() })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("automaton documents serialize")
}

/// Canonical automaton document.
pub fn write_automaton<W: Weight>(a: &StochasticAutomaton<W>) -> String {
    to_pretty(&automaton_value(a))
}

// partitions and triples

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    space: Option<String>,
    blocks: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PartitionEntry {
    Blocks(Vec<Vec<String>>),
    Full(PartitionDoc),
}

impl PartitionEntry {
    fn into_doc(self) -> PartitionDoc {
        match self {
            PartitionEntry::Blocks(blocks) => PartitionDoc { space: None, blocks },
            PartitionEntry::Full(doc) => doc,
        }
    }
}

fn build_partition(doc: PartitionDoc, space: &FiniteSpace, source: &str, at: &str) -> ParseResult<Partition> {
    if let Some(name) = &doc.space {
        if name != space.name() {
            return fail(
                source,
                format!("{at}space"),
                format!("partition is over `{name}`, expected `{}`", space.name()),
            );
        }
    }
    let mut claimed = vec![false; space.len()];
    let mut blocks = Vec::with_capacity(doc.blocks.len());
    for (i, block) in doc.blocks.iter().enumerate() {
        if block.is_empty() {
            return fail(source, format!("{at}blocks[{i}]"), "empty block");
        }
        let mut members = Vec::with_capacity(block.len());
        for (j, label) in block.iter().enumerate() {
            let location = format!("{at}blocks[{i}][{j}]");
            let k = lookup(space, label, source, &location)?;
            if std::mem::replace(&mut claimed[k], true) {
                return fail(source, location, format!("`{label}` appears in two blocks"));
            }
            members.push(k);
        }
        blocks.push(members);
    }
    blocks.extend((0..space.len()).filter(|&k| !claimed[k]).map(|k| vec![k]));
    Ok(Partition::from_blocks(space.len(), blocks).expect("blocks cover the space disjointly"))
}

/// Reads `{"space": ..., "blocks": [[...], ...]}`. Points not mentioned
/// form singleton blocks.
pub fn parse_partition(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<Partition> {
    let doc: PartitionDoc = from_json(text, source)?;
    build_partition(doc, space, source, "")
}

pub fn partition_value(p: &Partition, space: &FiniteSpace) -> Value {
    serde_json::json!({
        "space": space.name(),
        "blocks": p.blocks().iter().map(|b| labels(space, b)).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleDoc {
    alpha: PartitionEntry,
    beta: PartitionEntry,
    gamma: PartitionEntry,
}

/// Reads `{"alpha": ..., "beta": ..., "gamma": ...}` against the spaces of
/// `a`. Each entry is a partition document or a bare list of blocks.
pub fn parse_triple<W: Weight>(text: &str, source: &str, a: &StochasticAutomaton<W>) -> ParseResult<CongruenceTriple> {
    let doc: TripleDoc = from_json(text, source)?;
    Ok(CongruenceTriple::new(
        build_partition(doc.alpha.into_doc(), a.inputs(), source, "alpha.")?,
        build_partition(doc.beta.into_doc(), a.outputs(), source, "beta.")?,
        build_partition(doc.gamma.into_doc(), a.states(), source, "gamma.")?,
    ))
}

pub fn triple_value<W: Weight>(c: &CongruenceTriple, a: &StochasticAutomaton<W>) -> Value {
    serde_json::json!({
        "alpha": partition_value(&c.alpha, a.inputs()),
        "beta": partition_value(&c.beta, a.outputs()),
        "gamma": partition_value(&c.gamma, a.states()),
    })
}

fn labels(space: &FiniteSpace, points: &[usize]) -> Vec<String> {
    points.iter().map(|&i| space.label(i).to_string()).collect()
}

// distributions

/// Reads `{"label": "num/den", ...}` over `space`.
pub fn parse_distribution(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<Distribution> {
    let doc: Map<String, Value> = from_json(text, source)?;
    let mut entries = Vec::with_capacity(doc.len());
    for (label, value) in &doc {
        let k = lookup(space, label, source, label)?;
        let Some(text) = value.as_str() else {
            return fail(source, label.as_str(), "weight must be a string \"num/den\"");
        };
        entries.push((k, parse_rational(text, source, label)?));
    }
    SubDistribution::from_weights(entries).or_else(|e| fail(source, "distribution", e.to_string()))
}

pub fn distribution_value<W: Weight>(d: &SubDistribution<usize, W>, space: &FiniteSpace) -> Value {
    Value::Object(d.iter().map(|(&k, p)| (space.label(k).to_string(), Value::String(p.to_fraction_string()))).collect())
}

/// Output words keyed by their rendering; words in lexicographic order.
pub fn word_distribution_value<W: Weight>(d: &SubDistribution<Word, W>, space: &FiniteSpace) -> Value {
    Value::Object(d.iter().map(|(w, p)| (space.render_word(w), Value::String(p.to_fraction_string()))).collect())
}

// words, streams and trees

#[derive(Deserialize)]
#[serde(untagged)]
enum WordDoc {
    Concat(String),
    Letters(Vec<String>),
}

fn build_word(doc: WordDoc, space: &FiniteSpace, source: &str, location: &str) -> ParseResult<Word> {
    let letters: Vec<String> = match doc {
        WordDoc::Letters(v) => v,
        WordDoc::Concat(s) if space.single_char_labels() => s.chars().map(String::from).collect(),
        WordDoc::Concat(s) => {
            return fail(
                source,
                location,
                format!("`{s}`: {} has multi-character labels, write the word as a JSON array", space.name()),
            )
        }
    };
    letters.iter().enumerate().map(|(i, l)| lookup(space, l, source, &format!("{location}[{i}]"))).collect()
}

/// A word argument: a JSON string or array, or bare concatenated letters.
pub fn parse_word(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<Word> {
    let trimmed = text.trim();
    let doc = if trimmed.starts_with('[') || trimmed.starts_with('"') {
        from_json(trimmed, source)?
    } else {
        WordDoc::Concat(trimmed.to_string())
    };
    build_word(doc, space, source, "word")
}

/// A JSON array of words.
pub fn parse_word_set(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<Vec<Word>> {
    let docs: Vec<WordDoc> = from_json(text, source)?;
    docs.into_iter().enumerate().map(|(i, d)| build_word(d, space, source, &format!("[{i}]"))).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamDoc {
    prefix: WordDoc,
    #[serde(default)]
    period: Option<WordDoc>,
}

fn build_stream(doc: StreamDoc, space: &FiniteSpace, source: &str, at: &str) -> ParseResult<StreamPresentation> {
    let prefix = build_word(doc.prefix, space, source, &format!("{at}prefix"))?;
    let period = match doc.period {
        Some(p) => build_word(p, space, source, &format!("{at}period"))?,
        None => Vec::new(),
    };
    Ok(StreamPresentation::periodic(prefix, period))
}

/// Reads `{"prefix": w, "period": w}`; an absent or empty period gives a
/// finite word.
pub fn parse_stream(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<StreamPresentation> {
    let doc: StreamDoc = from_json(text, source)?;
    build_stream(doc, space, source, "")
}

pub fn stream_value(s: &StreamPresentation, space: &FiniteSpace) -> Value {
    serde_json::json!({
        "prefix": space.render_word(&s.prefix),
        "period": space.render_word(&s.period),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PathDoc {
    Stream(StreamDoc),
    Word(WordDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    paths: Vec<PathDoc>,
}

/// Reads `{"paths": [...]}`; each path is a word or a stream document.
pub fn parse_tree(text: &str, source: &str, space: &FiniteSpace) -> ParseResult<PrefixTree> {
    let doc: TreeDoc = from_json(text, source)?;
    let mut paths = Vec::with_capacity(doc.paths.len());
    for (i, p) in doc.paths.into_iter().enumerate() {
        let at = format!("paths[{i}]");
        paths.push(match p {
            PathDoc::Stream(s) => build_stream(s, space, source, &format!("{at}."))?,
            PathDoc::Word(w) => StreamPresentation::finite(build_word(w, space, source, &at)?),
        });
    }
    PrefixTree::new(paths).or_else(|e| fail(source, "paths", e.to_string()))
}

// relations

/// A stochastic relation between two finite spaces, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub domain: Arc<FiniteSpace>,
    pub codomain: Arc<FiniteSpace>,
    pub rows: Vec<Distribution>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    domain: Vec<String>,
    codomain: Vec<String>,
    rows: Map<String, Value>,
}

/// Reads `{"domain": [...], "codomain": [...], "rows": {"u": {"p": "1/2"}}}`.
/// Points without a row map to the zero measure.
pub fn parse_relation(text: &str, source: &str) -> ParseResult<Relation> {
    let doc: RelationDoc = from_json(text, source)?;
    let space = |name: &str, labels: Vec<String>| {
        FiniteSpace::new(name, labels).map(Arc::new).or_else(|e| fail(source, name, e.to_string()))
    };
    let domain = space("domain", doc.domain)?;
    let codomain = space("codomain", doc.codomain)?;
    let mut rows = vec![SubDistribution::zero(); domain.len()];
    for (label, row) in doc.rows {
        let location = format!("rows.{label}");
        let u = lookup(&domain, &label, source, &location)?;
        let text = serde_json::to_string(&row).expect("JSON values serialize");
        rows[u] = parse_distribution(&text, source, &codomain)
            .map_err(|e| ParseError { location: format!("{location}.{}", e.location), ..e })?;
    }
    Ok(Relation { domain, codomain, rows })
}

// morphisms

/// Component maps of a morphism, as label-to-label objects.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapsDoc {
    f: Map<String, Value>,
    g: Map<String, Value>,
    h: Map<String, Value>,
}

fn build_map(
    doc: &Map<String, Value>,
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
    source: &str,
    name: &str,
) -> ParseResult<Vec<usize>> {
    let mut map = vec![None; domain.len()];
    for (label, value) in doc {
        let location = format!("{name}.{label}");
        let i = lookup(domain, label, source, &location)?;
        let Some(image) = value.as_str() else {
            return fail(source, location, "image must be a label");
        };
        map[i] = Some(lookup(codomain, image, source, &location)?);
    }
    map.into_iter()
        .enumerate()
        .map(|(i, m)| match m {
            Some(j) => Ok(j),
            None => fail(source, name, format!("no image for `{}`", domain.label(i))),
        })
        .collect()
}

/// Reads `{"f": {...}, "g": {...}, "h": {...}}` between two automata.
pub fn parse_maps<W: Weight>(
    text: &str,
    source: &str,
    from: &StochasticAutomaton<W>,
    to: &StochasticAutomaton<W>,
) -> ParseResult<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let doc: MapsDoc = from_json(text, source)?;
    Ok((
        build_map(&doc.f, from.inputs(), to.inputs(), source, "f")?,
        build_map(&doc.g, from.outputs(), to.outputs(), source, "g")?,
        build_map(&doc.h, from.states(), to.states(), source, "h")?,
    ))
}

fn map_value(map: &[usize], domain: &FiniteSpace, codomain: &FiniteSpace) -> Value {
    Value::Object(
        map.iter()
            .enumerate()
            .map(|(i, &j)| (domain.label(i).to_string(), Value::String(codomain.label(j).to_string())))
            .collect(),
    )
}

pub fn maps_value<W: Weight>(m: &Morphism<W>) -> Value {
    let (s, t) = (m.source(), m.target());
    serde_json::json!({
        "f": map_value(m.f(), s.inputs(), t.inputs()),
        "g": map_value(m.g(), s.outputs(), t.outputs()),
        "h": map_value(m.h(), s.states(), t.states()),
    })
}

/// The factor automaton document plus a `classes` object mapping each new
/// label to its members, per space.
pub fn factor_value<W: Weight>(fr: &FactorResult<W>) -> Value {
    let mut value = automaton_value(fr.factor());
    let [xs, ys, zs] = fr.class_members();
    let (base, quotient) = (fr.source(), fr.factor());
    let classes = |members: Vec<Vec<usize>>, base: &FiniteSpace, quotient: &FiniteSpace| {
        Value::Object(
            members
                .iter()
                .enumerate()
                .map(|(c, m)| (quotient.label(c).to_string(), serde_json::json!(labels(base, m))))
                .collect(),
        )
    };
    value.as_object_mut().expect("automaton documents are objects").insert(
        "classes".into(),
        serde_json::json!({
            "inputs": classes(xs, base.inputs(), quotient.inputs()),
            "outputs": classes(ys, base.outputs(), quotient.outputs()),
            "states": classes(zs, base.states(), quotient.states()),
        }),
    );
    value
}
