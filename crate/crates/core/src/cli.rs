//! The `delcheck` command line.
//!
//! Model specs: `initial`, an action spec (`is`, `bc`, `sa:k`,
//! `sa-trivial`, `round:waitfree`, `round:<adversary.json>`), a product
//! `I[<action>]`, or a path to a model JSON file. `check`, `obstruct` and
//! `solve` lift a bare action spec to its product with the initial model.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict,
//! 2 usage error, 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversary::{Adversary, AdversaryJson};
use crate::complex::{ChromaticComplex, ComplexJson};
use crate::error::{Error, Result};
use crate::logic::{parse_formula, random, Evaluator, Formula, FormulaFactory, SimplicialModel, Verdict};
use crate::obstruction::{
    adversary_obstruction, binary_consensus_obstruction, nishida_obstruction, verify_obstruction,
    DEFAULT_COUNTEREXAMPLE_CAP,
};
use crate::solvability::{find_morphism, knowledge_gain_check, SolvabilityStatus, SolveReport, DEFAULT_BUDGET};
use crate::tasks::{self, ActionModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Number of random positive formulas used for the knowledge-gain check
/// after a successful `solve`.
const KNOWLEDGE_GAIN_SAMPLES: usize = 100;
const KNOWLEDGE_GAIN_DEPTH: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "delcheck", version, about = "Simplicial model checker and obstruction generator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a model and write it as JSON (or DOT/text).
    Build {
        spec: String,
        /// Also write the Kripke graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Model check a formula.
    Check {
        model: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        opts: Opts,
    },
    /// Generate an obstruction formula and verify it.
    Obstruct {
        task: String,
        protocol: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        opts: Opts,
    },
    /// Search for a morphism from protocol to task.
    Solve {
        protocol: String,
        task: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Seed for the random formulas of the knowledge-gain check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: Opts,
    },
    /// Export a model (DOT by default) or a generated formula.
    Export {
        spec: Option<String>,
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug)]
struct Opts {
    /// Dimension: agents are 0..=n.
    #[arg(long)]
    n: Option<usize>,
    /// Input values, comma separated.
    #[arg(long, value_delimiter = ',')]
    inputs: Option<Vec<i64>>,
    /// Agreement bound for `sa` and `nishida` without an explicit k.
    #[arg(long)]
    k: Option<usize>,
    /// Adversary JSON file for `round` and the `adversary` generator.
    #[arg(long)]
    adversary: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct FormulaArg {
    #[arg(long)]
    formula: Option<String>,
    /// Formula generator: bc | nishida[:k] | adversary.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
enum RoundSource {
    Default,
    WaitFree,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
enum ActionSpec {
    Is,
    Bc,
    Sa(Option<usize>),
    Trivial,
    Round(RoundSource),
}

#[derive(Clone, Debug, PartialEq)]
enum Spec {
    Initial,
    Action(ActionSpec),
    Product(ActionSpec),
    File(PathBuf),
}

fn parse_action(text: &str) -> Result<ActionSpec> {
    let spec_err = || Error::Spec(text.to_string());
    Ok(match text {
        "is" => ActionSpec::Is,
        "bc" => ActionSpec::Bc,
        "sa" => ActionSpec::Sa(None),
        "sa-trivial" | "id" => ActionSpec::Trivial,
        "round" => ActionSpec::Round(RoundSource::Default),
        "round:waitfree" => ActionSpec::Round(RoundSource::WaitFree),
        _ => {
            if let Some(k) = text.strip_prefix("sa:") {
                ActionSpec::Sa(Some(k.parse().map_err(|_| spec_err())?))
            } else if let Some(file) = text.strip_prefix("round:") {
                ActionSpec::Round(RoundSource::File(PathBuf::from(file)))
            } else {
                return Err(spec_err());
            }
        }
    })
}

fn parse_spec(text: &str) -> Result<Spec> {
    let text = text.trim();
    if text == "initial" || text == "I" {
        return Ok(Spec::Initial);
    }
    if let Some(inner) = text.strip_prefix("I[").and_then(|t| t.strip_suffix(']')) {
        return Ok(Spec::Product(parse_action(inner.trim())?));
    }
    match parse_action(text) {
        Ok(a) => Ok(Spec::Action(a)),
        Err(_) if text.ends_with(".json") => Ok(Spec::File(PathBuf::from(text))),
        Err(e) => Err(e),
    }
}

impl Spec {
    fn lifted(self) -> Spec {
        match self {
            Spec::Action(a) => Spec::Product(a),
            other => other,
        }
    }

    fn action(&self) -> Option<&ActionSpec> {
        match self {
            Spec::Action(a) | Spec::Product(a) => Some(a),
            _ => None,
        }
    }
}

fn read_adversary(path: &Path) -> Result<Adversary> {
    let text = std::fs::read_to_string(path)?;
    Adversary::from_json(&serde_json::from_str::<AdversaryJson>(&text)?)
}

fn read_model(path: &Path) -> Result<SimplicialModel> {
    let text = std::fs::read_to_string(path)?;
    SimplicialModel::from_json(&serde_json::from_str::<ComplexJson>(&text)?)
}

/// Settings shared by every spec of one command.
struct Context {
    n: usize,
    inputs: Vec<i64>,
    k: Option<usize>,
    adversary: Option<Adversary>,
    factory: FormulaFactory,
}

impl Context {
    /// Resolves `n` (flag, then any adversary or model file, then 1) and
    /// the input set (flag, else `{0,1}` when binary consensus is
    /// involved, else `Π`).
    fn new(opts: &Opts, specs: &[&Spec]) -> Result<Self> {
        let adversary = opts.adversary.as_deref().map(read_adversary).transpose()?;
        let mut file_n = adversary.as_ref().map(Adversary::dim);
        for spec in specs {
            match spec {
                Spec::File(p) if file_n.is_none() => file_n = Some(read_model(p)?.dim()),
                _ => {}
            }
            if let Some(ActionSpec::Round(RoundSource::File(p))) = spec.action() {
                file_n = file_n.or(Some(read_adversary(p)?.dim()));
            }
        }
        let n = opts.n.or(file_n).unwrap_or(1);
        let involves_bc = specs.iter().any(|s| s.action() == Some(&ActionSpec::Bc));
        let inputs = match &opts.inputs {
            Some(v) => v.clone(),
            None if involves_bc => vec![0, 1],
            None => (0..=n as i64).collect(),
        };
        Ok(Context { n, inputs, k: opts.k, adversary, factory: FormulaFactory::new() })
    }

    fn adversary_for(&self, source: &RoundSource) -> Result<Adversary> {
        let adv = match source {
            RoundSource::WaitFree => Adversary::wait_free(self.n),
            RoundSource::File(p) => read_adversary(p)?,
            RoundSource::Default => self.adversary.clone().unwrap_or_else(|| Adversary::wait_free(self.n)),
        };
        if adv.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, adv.dim()));
        }
        Ok(adv)
    }

    fn action(&mut self, spec: &ActionSpec) -> Result<ActionModel> {
        match spec {
            ActionSpec::Is => tasks::immediate_snapshot_action(self.n, &self.inputs, &mut self.factory),
            ActionSpec::Bc => Ok(tasks::binary_consensus_action(self.n, &mut self.factory)),
            ActionSpec::Sa(k) => {
                let k = k.or(self.k).ok_or_else(|| Error::Spec("sa needs a bound: sa:k or --k".into()))?;
                tasks::set_agreement_action(self.n, k, &mut self.factory)
            }
            ActionSpec::Trivial => tasks::own_input_action(self.n, &self.inputs, &mut self.factory),
            ActionSpec::Round(src) => {
                let adv = self.adversary_for(src)?;
                tasks::round_operator_action(&adv, &self.inputs, &mut self.factory)
            }
        }
    }

    fn model(&mut self, spec: &Spec) -> Result<SimplicialModel> {
        match spec {
            Spec::Initial => tasks::initial_model(self.n, &self.inputs),
            Spec::File(p) => read_model(p),
            Spec::Action(_) => Err(Error::Spec("an action model is not a simplicial model".into())),
            Spec::Product(a) => {
                let initial = tasks::initial_model(self.n, &self.inputs)?;
                match a {
                    ActionSpec::Is => tasks::immediate_snapshot_protocol(&initial),
                    ActionSpec::Round(src) => tasks::round_operator_protocol(&initial, &self.adversary_for(src)?),
                    other => {
                        let action = self.action(other)?;
                        tasks::product_update(&initial, &action)
                    }
                }
            }
        }
    }

    /// The adversary behind a spec, or the `--adversary` flag, or wait-free.
    fn adversary_of(&self, specs: &[&Spec]) -> Result<Adversary> {
        for spec in specs {
            if let Some(ActionSpec::Round(src)) = spec.action() {
                return self.adversary_for(src);
            }
        }
        self.adversary_for(&RoundSource::Default)
    }

    fn formula(&mut self, arg: &FormulaArg, specs: &[&Spec]) -> Result<Formula> {
        if let Some(text) = &arg.formula {
            return parse_formula(text, &mut self.factory);
        }
        let gen = match &arg.gen {
            Some(g) => g.clone(),
            None if specs.iter().any(|s| s.action() == Some(&ActionSpec::Bc)) => "bc".into(),
            None => "adversary".into(),
        };
        match gen.as_str() {
            "bc" => Ok(binary_consensus_obstruction(self.n, &mut self.factory)),
            "adversary" => adversary_obstruction(&self.adversary_of(specs)?, &mut self.factory),
            "nishida" => {
                let k = self.k.ok_or_else(|| Error::Spec("nishida needs a bound: nishida:k or --k".into()))?;
                nishida_obstruction(self.n, k, &mut self.factory)
            }
            other => match other.strip_prefix("nishida:").map(str::parse::<usize>) {
                Some(Ok(k)) => nishida_obstruction(self.n, k, &mut self.factory),
                _ => Err(Error::Spec(format!("unknown generator `{other}`"))),
            },
        }
    }
}

/// Builds the simplicial model named by `spec`, lifting a bare action
/// spec to its product with the initial model. `inputs` defaults as on
/// the command line.
pub fn model_from_spec(spec: &str, n: usize, inputs: Option<&[i64]>, k: Option<usize>) -> Result<SimplicialModel> {
    let spec = parse_spec(spec)?.lifted();
    let opts = Opts { n: Some(n), inputs: inputs.map(<[i64]>::to_vec), k, adversary: None, out: None, format: None };
    Context::new(&opts, &[&spec])?.model(&spec)
}

/// DOT rendering of the Kripke graph; parallel edges are merged into one
/// edge labeled with every agent the two facets share.
pub fn to_dot(complex: &ChromaticComplex) -> String {
    let mut out = String::from("graph kripke {\n  node [shape=box, fontname=monospace];\n");
    for x in complex.facet_ids() {
        let label = format!("{:?}", complex.facet(x)).replace('"', "\\\"");
        out.push_str(&format!("  f{x} [label=\"{x}: {label}\"];\n"));
    }
    let mut pairs = std::collections::BTreeMap::new();
    for v in 0..complex.vertices().len() as u32 {
        let star = complex.star(crate::complex::VertexId(v));
        for (i, &x) in star.iter().enumerate() {
            for &y in &star[i + 1..] {
                let key = if x < y { (x, y) } else { (y, x) };
                pairs.entry(key).or_insert_with(|| complex.shared_colors(x, y));
            }
        }
    }
    for ((x, y), agents) in pairs {
        let names: Vec<String> = agents.iter().map(|a| a.to_string()).collect();
        out.push_str(&format!("  f{x} -- f{y} [label=\"{}\"];\n", names.join(",")));
    }
    out.push_str("}\n");
    out
}

fn model_text(model: &SimplicialModel) -> String {
    let mut out = format!("n = {}\nfacets = {}\n", model.dim(), model.facet_count());
    for x in model.facet_ids() {
        out.push_str(&format!("{x}: {:?}\n", model.complex().facet(x)));
    }
    out
}

fn action_text(action: &ActionModel) -> String {
    let c = action.complex();
    let mut out = format!("action {}\nn = {}\nfacets = {}\n", action.name(), c.dim(), c.facet_count());
    for y in c.facet_ids() {
        out.push_str(&format!("{y}: {:?} pre {}\n", c.facet(y), action.pre(y)));
    }
    out
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() {
    let threads = std::env::var("OBSTRUCTION_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    if let Some(t) = threads.filter(|&t| t > 0) {
        // Fails only if the pool already exists, e.g. on a second call.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

#[derive(Serialize)]
struct CheckOutput {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    facet: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<crate::complex::VertexJson>>,
}

#[derive(Serialize)]
struct SolveOutput {
    #[serde(flatten)]
    report: SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    knowledge_gain: Option<bool>,
}

#[derive(Serialize)]
struct FormulaOutput {
    formula: String,
    positive: bool,
    depth: usize,
    dag_size: usize,
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Build { spec, dot, opts } => {
            let spec = parse_spec(&spec)?;
            let mut ctx = Context::new(&opts, &[&spec])?;
            let format = opts.format.unwrap_or(Format::Json);
            let (text, complex) = match &spec {
                Spec::Action(a) => {
                    let action = ctx.action(a)?;
                    let text = match format {
                        Format::Json => json(&action.to_json())?,
                        Format::Dot => to_dot(action.complex()),
                        Format::Text => action_text(&action),
                    };
                    (text, action.complex().clone())
                }
                other => {
                    let model = ctx.model(other)?;
                    let text = match format {
                        Format::Json => json(&model.to_json())?,
                        Format::Dot => to_dot(model.complex()),
                        Format::Text => model_text(&model),
                    };
                    (text, model.complex().clone())
                }
            };
            emit(&opts.out, &text, stdout)?;
            if let Some(path) = dot {
                std::fs::write(path, to_dot(&complex))?;
            }
            Ok(EXIT_OK)
        }
        Command::Check { model, formula, opts } => {
            let spec = parse_spec(&model)?.lifted();
            let mut ctx = Context::new(&opts, &[&spec])?;
            let m = ctx.model(&spec)?;
            let phi = ctx.formula(&formula, &[&spec])?;
            let verdict = Evaluator::new(&m).valid(&phi)?;
            let output = match verdict {
                Verdict::Valid => CheckOutput { verdict: "valid", facet: None, vertices: None },
                Verdict::Counterexample(x) => CheckOutput {
                    verdict: "counterexample",
                    facet: Some(x.0),
                    vertices: Some(m.complex().to_json().facets.swap_remove(x.index()).vertices),
                },
            };
            let text = match opts.format.unwrap_or(Format::Text) {
                Format::Json => json(&output)?,
                _ => match verdict {
                    Verdict::Valid => "valid\n".to_string(),
                    Verdict::Counterexample(x) => {
                        format!("counterexample {x}: {:?}\n", m.complex().facet(x))
                    }
                },
            };
            emit(&opts.out, &text, stdout)?;
            Ok(if verdict.is_valid() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Obstruct { task, protocol, formula, opts } => {
            let task = parse_spec(&task)?.lifted();
            let protocol = parse_spec(&protocol)?.lifted();
            let specs = [&task, &protocol];
            let mut ctx = Context::new(&opts, &specs)?;
            let tm = ctx.model(&task)?;
            let pm = ctx.model(&protocol)?;
            let phi = ctx.formula(&formula, &specs)?;
            let report = verify_obstruction(&tm, &pm, &phi, DEFAULT_COUNTEREXAMPLE_CAP)?;
            let text = match opts.format.unwrap_or(Format::Json) {
                Format::Json => json(&report)?,
                _ => format!(
                    "formula: {}\npositive: {}\ntask valid: {}\nprotocol counterexamples: {:?}\nobstruction: {}\n",
                    report.formula,
                    report.positive,
                    report.task_valid,
                    report.protocol_counterexamples.iter().map(|x| x.0).collect::<Vec<_>>(),
                    report.is_obstruction
                ),
            };
            emit(&opts.out, &text, stdout)?;
            Ok(if report.is_obstruction { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Solve { protocol, task, budget, seed, opts } => {
            let protocol = parse_spec(&protocol)?.lifted();
            let task = parse_spec(&task)?.lifted();
            let specs = [&protocol, &task];
            let mut ctx = Context::new(&opts, &specs)?;
            let pm = ctx.model(&protocol)?;
            let tm = ctx.model(&task)?;
            let result = find_morphism(&pm, &tm, budget)?;
            let knowledge_gain = match result.witness() {
                Some(w) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let values: Vec<i64> = ctx.inputs.clone();
                    let formulas: Vec<Formula> = (0..KNOWLEDGE_GAIN_SAMPLES)
                        .map(|_| {
                            random::random_positive(&mut rng, &mut ctx.factory, KNOWLEDGE_GAIN_DEPTH, ctx.n, &values)
                        })
                        .collect();
                    Some(knowledge_gain_check(w, &pm, &tm, &formulas)?)
                }
                None => None,
            };
            let output = SolveOutput { report: SolveReport::new(&result, &pm, &tm), knowledge_gain };
            let full = json(&output)?;
            let summary = format!("{} (explored {})\n", result.label(), result.explored);
            match (&opts.out, opts.format.unwrap_or(Format::Text)) {
                (Some(path), format) => {
                    std::fs::write(path, &full)?;
                    stdout.write_all(if format == Format::Json { full.as_bytes() } else { summary.as_bytes() })?;
                }
                (None, Format::Json) => stdout.write_all(full.as_bytes())?,
                (None, _) => stdout.write_all(summary.as_bytes())?,
            }
            Ok(match result.status {
                SolvabilityStatus::Solvable(_) => EXIT_OK,
                SolvabilityStatus::Unsolvable => EXIT_NEGATIVE,
                SolvabilityStatus::ResourceLimit => EXIT_LIMIT,
            })
        }
        Command::Export { spec, formula, opts } => {
            let spec = spec.as_deref().map(parse_spec).transpose()?;
            let specs: Vec<&Spec> = spec.iter().collect();
            let mut ctx = Context::new(&opts, &specs)?;
            if formula.formula.is_some() || formula.gen.is_some() {
                let phi = ctx.formula(&formula, &specs)?;
                let text = match opts.format.unwrap_or(Format::Text) {
                    Format::Json => json(&FormulaOutput {
                        formula: phi.to_string(),
                        positive: phi.is_positive(),
                        depth: phi.depth(),
                        dag_size: phi.dag_size(),
                    })?,
                    _ => format!("{phi}\n"),
                };
                emit(&opts.out, &text, stdout)?;
                return Ok(EXIT_OK);
            }
            let spec = spec.ok_or_else(|| Error::Spec("export needs a model spec or a formula".into()))?;
            let format = opts.format.unwrap_or(Format::Dot);
            let text = match &spec {
                Spec::Action(a) => {
                    let action = ctx.action(a)?;
                    match format {
                        Format::Json => json(&action.to_json())?,
                        Format::Dot => to_dot(action.complex()),
                        Format::Text => action_text(&action),
                    }
                }
                other => {
                    let model = ctx.model(other)?;
                    match format {
                        Format::Json => json(&model.to_json())?,
                        Format::Dot => to_dot(model.complex()),
                        Format::Text => model_text(&model),
                    }
                }
            };
            emit(&opts.out, &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `args`, writing normal output to `stdout` and
/// diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
