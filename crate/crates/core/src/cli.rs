//! The `stocon` command line.
//!
//! Every subcommand produces one report
//! `{command, status, result, witness, error}` where `status` is `ok`,
//! `violation` (the checked property fails) or `error`. Exit codes: 0 ok,
//! 1 violation, 2 parse failure, 3 failed precondition, 4 internal error.
//! The report is built completely before anything is written.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::automaton::validate_automaton;
use crate::congruence::{
    coarsest_state_congruence, describe_congruence_witness, is_congruence, is_friendly, kernel_congruence,
    CongruenceTriple, FriendshipWitness,
};
use crate::error::Error;
use crate::factor::{em_factorization, factor_automaton, refactor_isomorphism, stepwise_reduction, ReductionOrder};
use crate::io::{self, ParseError};
use crate::morphism::{is_morphism, Morphism};
use crate::partition::Partition;
use crate::randomization::is_random_friend;
use crate::space::FiniteSpace;
use crate::streams::{
    black_box, check_power_friendship, cylinder_probability, decorate_tree, extend_word, leaf_output,
};
use crate::testing::Generator;
use crate::weight::Weight;
use crate::{Automaton, SubDistribution};

#[derive(Parser, Debug)]
#[command(name = "stocon", version, about = "Congruences and factor automata of finite stochastic automata")]
struct Cli {
    /// Report format; the STOCON_OUTPUT environment variable overrides it.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    StatesFirst,
    IoFirst,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an automaton file against every invariant.
    Validate { automaton: PathBuf },
    /// Is XI friendly to THETA for a stochastic relation?
    CheckFriendly { relation: PathBuf, xi: PathBuf, theta: PathBuf },
    /// Is the triple a congruence?
    CheckCongruence { automaton: PathBuf, triple: PathBuf },
    /// Coarsest state relation refining the triple's gamma that completes alpha and beta.
    Coarsest { automaton: PathBuf, triple: PathBuf },
    /// Factor automaton by a congruence.
    Factor { automaton: PathBuf, triple: PathBuf },
    /// Factor in two stages, states and inputs/outputs separately.
    Stepwise {
        automaton: PathBuf,
        triple: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::StatesFirst)]
        order: Order,
    },
    /// Compare factoring twice with factoring once by the lifted congruence.
    RefactorCheck {
        automaton: PathBuf,
        triple: PathBuf,
        /// Congruence on the factor by TRIPLE.
        second: PathBuf,
    },
    /// Kernel congruence of a morphism.
    Kernel { source: PathBuf, target: PathBuf, maps: PathBuf },
    /// Factorization of a morphism through its kernel factor.
    EmFactor { source: PathBuf, target: PathBuf, maps: PathBuf },
    /// Joint law of final state and output word from a start state.
    RunWord {
        automaton: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        word: String,
    },
    /// Output word law for an initial distribution.
    Blackbox {
        automaton: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Probability of a cylinder of output streams.
    Cylinder {
        automaton: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        depth: usize,
        /// JSON array of output words of length DEPTH.
        #[arg(long)]
        set: String,
    },
    /// Output law at a node of a prefix tree.
    Tree {
        automaton: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        word: String,
        /// Output letters; reports the mass of words ending in one of them.
        #[arg(long)]
        last: Option<String>,
    },
    /// Friendship of word powers of a congruence.
    PowerFriendship {
        automaton: PathBuf,
        triple: PathBuf,
        #[arg(long, default_value_t = 2)]
        length: usize,
        /// Also check the black box for this initial distribution.
        #[arg(long)]
        mu: Option<PathBuf>,
    },
    /// Is XI a random friend to ZETA for a stochastic relation?
    RandomFriend { relation: PathBuf, xi: PathBuf, zeta: PathBuf },
    /// Run the built-in property checks on seeded random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::CheckFriendly { .. } => "check-friendly",
            Command::CheckCongruence { .. } => "check-congruence",
            Command::Coarsest { .. } => "coarsest",
            Command::Factor { .. } => "factor",
            Command::Stepwise { .. } => "stepwise",
            Command::RefactorCheck { .. } => "refactor-check",
            Command::Kernel { .. } => "kernel",
            Command::EmFactor { .. } => "em-factor",
            Command::RunWord { .. } => "run-word",
            Command::Blackbox { .. } => "blackbox",
            Command::Cylinder { .. } => "cylinder",
            Command::Tree { .. } => "tree",
            Command::PowerFriendship { .. } => "power-friendship",
            Command::RandomFriend { .. } => "random-friend",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    pub output: Option<PathBuf>,
}

struct Success {
    violated: bool,
    result: Value,
    witness: Value,
}

fn ok(result: Value) -> Success {
    Success { violated: false, result, witness: Value::Null }
}

fn checked(holds: bool, result: Value, witness: Value) -> Success {
    Success { violated: !holds, result, witness }
}

enum Failure {
    Parse(ParseError),
    Core(Error),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Step<T> = std::result::Result<T, Failure>;

impl Failure {
    fn status_and_code(&self) -> (&'static str, i32) {
        match self {
            Failure::Parse(_) | Failure::Core(Error::MalformedInput(_)) => ("error", 2),
            Failure::Core(
                Error::NotACongruence(_) | Error::NotAMorphism(_) | Error::StageDecompositionFailed { .. },
            ) => ("violation", 1),
            Failure::Core(Error::PreconditionViolated(_) | Error::FullProbabilityRequired(_) | Error::NotInTree(_)) => {
                ("error", 3)
            }
            Failure::Core(Error::InternalConsistency(_)) => ("error", 4),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Failure::Parse(e) => json!({
                "kind": "parse",
                "source": e.source,
                "location": e.location,
                "message": e.message,
            }),
            Failure::Core(e) => {
                let kind = match e {
                    Error::MalformedInput(_) => "malformed-input",
                    Error::PreconditionViolated(_) => "precondition-violated",
                    Error::FullProbabilityRequired(_) => "full-probability-required",
                    Error::NotACongruence(_) => "not-a-congruence",
                    Error::NotAMorphism(_) => "not-a-morphism",
                    Error::NotInTree(_) => "not-in-tree",
                    Error::StageDecompositionFailed { .. } => "stage-decomposition-failed",
                    Error::InternalConsistency(_) => "internal-consistency",
                };
                json!({ "kind": kind, "message": e.to_string() })
            }
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
/// `env_format` is the value of `STOCON_OUTPUT`, if set.
pub fn run<I, T>(args: I, env_format: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { text: e.render().to_string(), code, output: None };
        }
    };
    let format = match env_format {
        None => cli.format,
        Some(v) => match Format::from_str(v, true) {
            Ok(f) => f,
            Err(_) => {
                return Outcome {
                    text: format!("STOCON_OUTPUT must be `json` or `text`, got `{v}`\n"),
                    code: 2,
                    output: cli.output,
                }
            }
        },
    };

    let command = cli.command.name();
    let (status, code, result, witness, error) = match dispatch(cli.command) {
        Ok(s) if s.violated => ("violation", 1, s.result, s.witness, Value::Null),
        Ok(s) => ("ok", 0, s.result, s.witness, Value::Null),
        Err(f) => {
            let (status, code) = f.status_and_code();
            (status, code, Value::Null, Value::Null, f.to_value())
        }
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(command));
    report.insert("status".into(), json!(status));
    report.insert("result".into(), result);
    report.insert("witness".into(), witness);
    report.insert("error".into(), error);
    let report = Value::Object(report);

    let text = match format {
        Format::Json => io::to_pretty(&report),
        Format::Text => render_text(&report),
    };
    Outcome { text, code, output: cli.output }
}

/// Writes the report: to the output file through a temporary file and a
/// rename, or to stdout.
pub fn emit(outcome: &Outcome) -> std::io::Result<()> {
    match &outcome.output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.text.as_bytes())?;
            out.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(outcome.text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

fn render_text(report: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", report, &mut lines);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn flatten(path: &str, value: &Value, lines: &mut Vec<String>) {
    let child = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match value {
        Value::Null => {}
        Value::String(s) => lines.push(format!("{path}: {s}")),
        Value::Object(map) if map.is_empty() => lines.push(format!("{path}: {{}}")),
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&child(k), v, lines);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), v, lines);
            }
        }
        other => lines.push(format!("{path}: {other}")),
    }
}

fn load_automaton(path: &Path) -> Step<Automaton> {
    Ok(io::parse_automaton(&io::read_file(path)?, &path.display().to_string())?)
}

fn load_triple(path: &Path, a: &Automaton) -> Step<CongruenceTriple> {
    Ok(io::parse_triple(&io::read_file(path)?, &path.display().to_string(), a)?)
}

fn load_partition(path: &Path, space: &FiniteSpace) -> Step<Partition> {
    Ok(io::parse_partition(&io::read_file(path)?, &path.display().to_string(), space)?)
}

fn load_distribution(path: &Path, space: &FiniteSpace) -> Step<crate::Distribution> {
    Ok(io::parse_distribution(&io::read_file(path)?, &path.display().to_string(), space)?)
}

fn load_morphism(source: &Path, target: &Path, maps: &Path) -> Step<Morphism<crate::Rational>> {
    let s = load_automaton(source)?;
    let t = load_automaton(target)?;
    let (f, g, h) = io::parse_maps(&io::read_file(maps)?, &maps.display().to_string(), &s, &t)?;
    Ok(Morphism::new(s, t, f, g, h)?)
}

fn labels(space: &FiniteSpace, points: &[usize]) -> Value {
    json!(points.iter().map(|&i| space.label(i)).collect::<Vec<_>>())
}

fn congruence_witness<W: Weight>(
    a: &crate::StochasticAutomaton<W>,
    c: &CongruenceTriple,
    w: &FriendshipWitness<(usize, usize), (usize, usize), W>,
) -> Value {
    let pair = |(x, z): (usize, usize)| json!({ "input": a.inputs().label(x), "state": a.states().label(z) });
    json!({
        "left": pair(w.left),
        "right": pair(w.right),
        "block": {
            "states": labels(a.states(), c.gamma.block(w.block.0)),
            "outputs": labels(a.outputs(), c.beta.block(w.block.1)),
        },
        "left_mass": w.left_mass.to_fraction_string(),
        "right_mass": w.right_mass.to_fraction_string(),
        "description": describe_congruence_witness(a, c, w),
    })
}

fn relation_witness<W: Weight>(
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
    theta: &Partition,
    w: &FriendshipWitness<usize, usize, W>,
) -> Value {
    json!({
        "left": domain.label(w.left),
        "right": domain.label(w.right),
        "block": labels(codomain, theta.block(w.block)),
        "left_mass": w.left_mass.to_fraction_string(),
        "right_mass": w.right_mass.to_fraction_string(),
    })
}

fn dispatch(command: Command) -> Step<Success> {
    match command {
        Command::Validate { automaton } => {
            let source = automaton.display().to_string();
            let raw = io::parse_raw_automaton(&io::read_file(&automaton)?, &source)?;
            let violations = validate_automaton(&raw);
            if violations.is_empty() {
                let a =
                    raw.build().map_err(|_| Error::InternalConsistency("validated automaton does not build".into()))?;
                return Ok(ok(json!({
                    "valid": true,
                    "inputs": a.inputs().len(),
                    "outputs": a.outputs().len(),
                    "states": a.states().len(),
                    "fully_probabilistic": a.is_fully_probabilistic(),
                })));
            }
            let listed: Vec<Value> =
                violations.iter().map(|v| json!({ "code": v.code(), "message": v.to_string() })).collect();
            Ok(checked(false, json!({ "valid": false }), json!({ "violations": listed })))
        }

        Command::CheckFriendly { relation, xi, theta } => {
            let rel = io::parse_relation(&io::read_file(&relation)?, &relation.display().to_string())?;
            let xi = load_partition(&xi, &rel.domain)?;
            let theta = load_partition(&theta, &rel.codomain)?;
            let report = is_friendly(&rel.rows, &xi, &theta)?;
            let witness = match &report.witness {
                Some(w) => relation_witness(&rel.domain, &rel.codomain, &theta, w),
                None => Value::Null,
            };
            Ok(checked(report.friendly(), json!({ "friendly": report.friendly() }), witness))
        }

        Command::CheckCongruence { automaton, triple } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            let report = is_congruence(&a, &c)?;
            let witness = match &report.witness {
                Some(w) => congruence_witness(&a, &c, w),
                None => Value::Null,
            };
            Ok(checked(report.friendly(), json!({ "friendly": report.friendly() }), witness))
        }

        Command::Coarsest { automaton, triple } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            let gamma = coarsest_state_congruence(&a, &c.alpha, &c.beta, &c.gamma)?;
            Ok(ok(json!({
                "classes": gamma.num_blocks(),
                "gamma": io::partition_value(&gamma, a.states()),
            })))
        }

        Command::Factor { automaton, triple } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            Ok(ok(io::factor_value(&factor_automaton(&a, &c)?)))
        }

        Command::Stepwise { automaton, triple, order } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            let (order, name) = match order {
                Order::StatesFirst => (ReductionOrder::StatesFirst, "states-first"),
                Order::IoFirst => (ReductionOrder::IoFirst, "io-first"),
            };
            let r = stepwise_reduction(&a, &c, order)?;
            Ok(ok(json!({
                "order": name,
                "stage_one": io::triple_value(&r.stage_one_triple, &a),
                "intermediate": io::factor_value(&r.stage_one),
                "stage_two": io::triple_value(&r.stage_two_triple, r.stage_one.factor()),
                "result": io::factor_value(&r.result),
                "to_direct": io::maps_value(&r.to_direct),
            })))
        }

        Command::RefactorCheck { automaton, triple, second } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            let first = factor_automaton(&a, &c)?;
            let c2 = load_triple(&second, first.factor())?;
            let r = refactor_isomorphism(&a, &c, &c2)?;
            let inverse = r.forward.then(&r.backward)?.is_identity() && r.backward.then(&r.forward)?.is_identity();
            Ok(ok(json!({
                "lifted": io::triple_value(&r.lifted, &a),
                "direct": io::factor_value(&r.direct),
                "iterated": io::factor_value(&r.iterated),
                "forward": io::maps_value(&r.forward),
                "backward": io::maps_value(&r.backward),
                "mutually_inverse": inverse,
            })))
        }

        Command::Kernel { source, target, maps } => {
            let m = load_morphism(&source, &target, &maps)?;
            Ok(ok(io::triple_value(&kernel_congruence(&m)?, m.source())))
        }

        Command::EmFactor { source, target, maps } => {
            let m = load_morphism(&source, &target, &maps)?;
            let kernel = kernel_congruence(&m)?;
            let em = em_factorization(&m)?;
            Ok(ok(json!({
                "kernel": io::triple_value(&kernel, m.source()),
                "factor": io::automaton_value(em.canonical.target()),
                "canonical": io::maps_value(&em.canonical),
                "mono": io::maps_value(&em.mono),
                "injective": em.mono.is_injective(),
            })))
        }

        Command::RunWord { automaton, state, word } => {
            let a = load_automaton(&automaton)?;
            let z = a.states().lookup(&state)?;
            let v = io::parse_word(&word, "--word", a.inputs())?;
            let d = extend_word(&a, &v, z)?;
            let entries: Vec<Value> = d
                .joint()
                .iter()
                .map(|((n, w), p)| {
                    json!({
                        "state": a.states().label(*n),
                        "output": a.outputs().render_word(w),
                        "p": p.to_fraction_string(),
                    })
                })
                .collect();
            Ok(ok(json!({
                "state": state,
                "word": a.inputs().render_word(&v),
                "mass": d.mass().to_fraction_string(),
                "distribution": entries,
            })))
        }

        Command::Blackbox { automaton, mu, word } => {
            let a = load_automaton(&automaton)?;
            let mu = load_distribution(&mu, a.states())?;
            let v = io::parse_word(&word, "--word", a.inputs())?;
            let d = black_box(&a, &mu, &v)?;
            Ok(ok(json!({
                "word": a.inputs().render_word(&v),
                "mass": d.mass().to_fraction_string(),
                "distribution": io::word_distribution_value(&d, a.outputs()),
            })))
        }

        Command::Cylinder { automaton, mu, stream, depth, set } => {
            let a = load_automaton(&automaton)?;
            let mu = load_distribution(&mu, a.states())?;
            let tau = io::parse_stream(&io::read_file(&stream)?, &stream.display().to_string(), a.inputs())?;
            let words = io::parse_word_set(&set, "--set", a.outputs())?;
            let p = cylinder_probability(&a, &mu, &tau, depth, &words)?;
            let rendered: Vec<String> = words.iter().map(|w| a.outputs().render_word(w)).collect();
            Ok(ok(json!({
                "stream": io::stream_value(&tau, a.inputs()),
                "depth": depth,
                "set": rendered,
                "probability": p.to_fraction_string(),
            })))
        }

        Command::Tree { automaton, mu, tree, word, last } => {
            let a = load_automaton(&automaton)?;
            let mu = load_distribution(&mu, a.states())?;
            let t = io::parse_tree(&io::read_file(&tree)?, &tree.display().to_string(), a.inputs())?;
            let v = io::parse_word(&word, "--word", a.inputs())?;
            let d = decorate_tree(&a, &mu, &t, &v)?;
            let mut result = Map::new();
            result.insert("word".into(), json!(a.inputs().render_word(&v)));
            result.insert("paths".into(), json!(t.containing(&v)));
            result.insert("decoration".into(), io::word_distribution_value(&d, a.outputs()));
            if let Some(last) = last {
                let letters = io::parse_word(&last, "--last", a.outputs())?;
                result.insert("last".into(), labels(a.outputs(), &letters));
                result.insert("leaf_output".into(), json!(leaf_output(&d, &letters).to_fraction_string()));
            }
            Ok(ok(Value::Object(result)))
        }

        Command::PowerFriendship { automaton, triple, length, mu } => {
            let a = load_automaton(&automaton)?;
            let c = load_triple(&triple, &a)?;
            let mu = match mu {
                Some(p) => Some(load_distribution(&p, a.states())?),
                None => None,
            };
            let r = check_power_friendship(&a, &c, length, mu.as_ref())?;
            let (x, y, z) = (a.inputs(), a.outputs(), a.states());
            let beta_blocks = |classes: &[usize]| -> Value {
                json!(classes.iter().map(|&b| labels(y, c.beta.block(b))).collect::<Vec<_>>())
            };
            let witness = if let Some(w) = &r.extended.witness {
                let side = |(v, s): &(Vec<usize>, usize)| json!({ "word": x.render_word(v), "state": z.label(*s) });
                json!({
                    "relation": "extended",
                    "left": side(&w.left),
                    "right": side(&w.right),
                    "block": { "states": labels(z, c.gamma.block(w.block.0)), "outputs": beta_blocks(&w.block.1) },
                    "left_mass": w.left_mass.to_fraction_string(),
                    "right_mass": w.right_mass.to_fraction_string(),
                })
            } else if let Some(w) = r.black_box.as_ref().and_then(|b| b.witness.as_ref()) {
                json!({
                    "relation": "black-box",
                    "left": x.render_word(&w.left),
                    "right": x.render_word(&w.right),
                    "block": { "outputs": beta_blocks(&w.block) },
                    "left_mass": w.left_mass.to_fraction_string(),
                    "right_mass": w.right_mass.to_fraction_string(),
                })
            } else {
                Value::Null
            };
            Ok(checked(
                r.friendly(),
                json!({
                    "length": length,
                    "friendly": r.friendly(),
                    "extended_friendly": r.extended.friendly(),
                    "black_box_friendly": r.black_box.as_ref().map(|b| b.friendly()),
                }),
                witness,
            ))
        }

        Command::RandomFriend { relation, xi, zeta } => {
            let rel = io::parse_relation(&io::read_file(&relation)?, &relation.display().to_string())?;
            let xi = load_partition(&xi, &rel.domain)?;
            let zeta = load_partition(&zeta, &rel.codomain)?;
            let r = is_random_friend(&rel.rows, &xi, &zeta)?;
            let friendly = is_friendly(&rel.rows, &xi, &zeta)?.friendly();
            let witness = match &r.witness {
                Some((mu, nu)) => json!({
                    "mu": io::distribution_value(mu, &rel.domain),
                    "nu": io::distribution_value(nu, &rel.domain),
                }),
                None => Value::Null,
            };
            Ok(checked(r.random_friend(), json!({ "random_friend": r.random_friend(), "friendly": friendly }), witness))
        }

        Command::Selftest { seed, count } => selftest(seed, count),
    }
}

/// Seeded property checks; a failure is an internal error.
fn selftest(seed: u64, count: usize) -> Step<Success> {
    let mut g = Generator::new(seed);
    let mut checks: Vec<(&str, usize)> = Vec::new();
    let mut tally = |name: &'static str, holds: bool| -> Step<()> {
        if !holds {
            return Err(Error::InternalConsistency(format!("selftest check `{name}` failed (seed {seed})")).into());
        }
        match checks.iter_mut().find(|(n, _)| *n == name) {
            Some((_, k)) => *k += 1,
            None => checks.push((name, 1)),
        }
        Ok(())
    };

    for _ in 0..count {
        let (a, c) = g.congruent((3, 2, 4), false, true);
        tally("congruence", is_congruence(&a, &c)?.friendly())?;

        let fr = factor_automaton(&a, &c)?;
        let m = fr.canonical();
        tally("factor-morphism", is_morphism(&a, fr.factor(), m.f(), m.g(), m.h())?.holds())?;

        let gamma = coarsest_state_congruence(&a, &c.alpha, &c.beta, &Partition::single_block(a.states().len()))?;
        tally("coarsest", c.gamma.refines(&gamma))?;

        for order in [ReductionOrder::StatesFirst, ReductionOrder::IoFirst] {
            let r = stepwise_reduction(&a, &c, order)?;
            tally("stepwise", r.to_direct.is_injective())?;
        }

        let mu = g.distribution(a.states().len(), false);
        tally("power-friendship", check_power_friendship(&a, &c, 2, Some(&mu))?.friendly())?;

        let rows = g.relation(4, 3, false);
        let (xi, zeta) = (g.partition(4, 3), g.partition(3, 3));
        let random = is_random_friend(&rows, &xi, &zeta)?.random_friend();
        tally("random-friend", random == is_friendly(&rows, &xi, &zeta)?.friendly())?;

        let mass: SubDistribution<usize, crate::Rational> = mu.push_forward(m.h())?;
        tally("push-forward", mass.mass() == mu.mass())?;
    }

    let passed: Map<String, Value> = checks.into_iter().map(|(n, k)| (n.to_string(), json!(k))).collect();
    Ok(ok(json!({ "seed": seed, "instances": count, "passed": passed })))
}
