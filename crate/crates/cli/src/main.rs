use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stp12::audit::{decompose, normalize, NormalMode, ReferenceSolution};
use stp12::exact::{optimum, ExactCaps, DEFAULT_NODE_CAP, DEFAULT_TERMINAL_CAP};
use stp12::harness::{
    compare, random_corpus, rs_algorithm, six_phase_algorithm, suite_dominance,
    suite_normalization, suite_oracles, suite_ratio_rs, suite_ratio_sixphase, CorpusEntry,
    NamedAlgorithm, SuiteConfig,
};
use stp12::heuristics::{rayward_smith_traced, TraceStep};
use stp12::io::{
    generate, parse_stp, write_audit_report, write_report, write_stp, AuditReport, GeneratorSpec,
};
use stp12::sixphase::{six_phase_traced, Pack3Strategy, SixPhaseOptions};
use stp12::{Connection, Error, FinishingMode, Instance};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "stp12",
    version,
    about = "Steiner tree heuristics and exact oracles for 1/2 metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more algorithms on an instance and print costs.
    Solve(SolveArgs),
    /// Compare heuristics against the exact optimum on many instances.
    Compare(CompareArgs),
    /// Normalize an optimal solution and report the steps taken.
    Audit(AuditArgs),
    /// Write a generated instance in STP format.
    Gen(GenArgs),
    /// Run a fixed-seed acceptance suite.
    Suite(SuiteArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Instance file in STP format.
    input: Option<PathBuf>,
    /// Generator spec, e.g. `random-gnp:n=10,p=3/10,r=4`.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

#[derive(Args)]
struct CapArgs {
    /// Largest node count for the brute-force oracle.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    /// Largest terminal count for the Dreyfus-Wagner oracle.
    #[arg(long, default_value_t = DEFAULT_TERMINAL_CAP)]
    terminal_cap: usize,
}

impl CapArgs {
    fn caps(&self) -> ExactCaps {
        ExactCaps {
            max_nodes: self.node_cap,
            max_terminals: self.terminal_cap,
        }
    }
}

#[derive(Args)]
struct AlgArgs {
    /// Finishing mode; both modes run when omitted (solve defaults to cheapest).
    #[arg(long, value_parser = parse_finishing)]
    finishing: Option<FinishingMode>,
    /// Phase 4 packing strategy for six-phase.
    #[arg(long, default_value = "exact", value_parser = parse_pack3)]
    pack3: Pack3Strategy,
    /// Candidate limit for exact 3-star packing.
    #[arg(long)]
    pack3_cap: Option<usize>,
}

impl AlgArgs {
    fn modes(&self) -> Vec<FinishingMode> {
        match self.finishing {
            Some(m) => vec![m],
            None => vec![FinishingMode::Cheapest, FinishingMode::StrictPaper],
        }
    }

    fn six_phase(&self, mode: FinishingMode) -> SixPhaseOptions {
        SixPhaseOptions {
            finishing: mode,
            pack3: self.pack3,
            pack3_cap: self.pack3_cap,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Rs,
    SixPhase,
    Exact,
    All,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "all")]
    alg: Alg,
    #[command(flatten)]
    algs: AlgArgs,
    #[command(flatten)]
    caps: CapArgs,
    /// Overrides the seed of a generator spec.
    #[arg(long)]
    seed: Option<u64>,
    /// Include the solution connections (0-based node ids).
    #[arg(long)]
    witness: bool,
    /// Include the collapse trace of each heuristic.
    #[arg(long)]
    trace: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Instance files in STP format.
    inputs: Vec<PathBuf>,
    /// Generator specs (repeatable).
    #[arg(long = "gen", value_name = "SPEC")]
    generators: Vec<String>,
    /// Add this many random instances (at most 12 nodes, 6 terminals).
    #[arg(long)]
    random: Option<usize>,
    /// Seed for --random and default seed for generator specs without one.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "all")]
    alg: Alg,
    #[command(flatten)]
    algs: AlgArgs,
    #[command(flatten)]
    caps: CapArgs,
    /// Include collapse traces in the report.
    #[arg(long)]
    trace: bool,
    /// Directory for minimized counterexample instances.
    #[arg(long, default_value = "counterexamples")]
    counterexamples: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "s3", value_parser = parse_mode)]
    mode: NormalMode,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    caps: CapArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec, e.g. `bp-adversarial:depth=5`.
    spec: String,
    /// Overrides the seed in the spec.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Rs,
    SixPhase,
    Oracles,
    Dominance,
    Normalization,
    All,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(value_enum)]
    suite: SuiteName,
    #[arg(long, default_value_t = stp12::harness::DEFAULT_SEED)]
    seed: u64,
    /// Size of the random part of the corpus.
    #[arg(long, default_value_t = stp12::harness::RANDOM_CORPUS_SIZE)]
    random: usize,
    /// Directory for `<suite>.json` summaries and counterexamples; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_finishing(s: &str) -> Result<FinishingMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pack3(s: &str) -> Result<Pack3Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<NormalMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::NodeOutOfRange { .. }
            | Error::SelfLoop(_)
            | Error::NoTerminals => EXIT_INPUT,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_instance(path: &Path) -> CliResult<Instance> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_stp(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn parse_spec(spec: &str, seed: Option<u64>) -> CliResult<GeneratorSpec> {
    let mut spec: GeneratorSpec = spec.parse()?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    Ok(spec)
}

fn load(source: &Source, seed: Option<u64>) -> CliResult<CorpusEntry> {
    match (&source.input, &source.generator) {
        (Some(path), _) => Ok(CorpusEntry {
            id: path.display().to_string(),
            instance: read_instance(path)?,
        }),
        (None, Some(spec)) => Ok(CorpusEntry::from_spec(&parse_spec(spec, seed)?)?),
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SolveResult {
    algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    finishing: Option<String>,
    cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Connection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceStep>>,
}

#[derive(Serialize)]
struct SolveReport {
    schema: &'static str,
    version: u32,
    instance_id: String,
    nodes: usize,
    terminals: usize,
    results: Vec<SolveResult>,
}

fn solve(args: &SolveArgs) -> CliResult<u8> {
    let entry = load(&args.source, args.seed)?;
    let inst = &entry.instance;
    let modes = match args.algs.finishing {
        Some(m) => vec![m],
        None => vec![FinishingMode::Cheapest],
    };
    let mut results = Vec::new();
    let wants = |a: Alg| args.alg == a || args.alg == Alg::All;
    let mut push = |name: &str, mode: Option<FinishingMode>, run: stp12::heuristics::Run| {
        results.push(SolveResult {
            algorithm: name.to_string(),
            finishing: mode.map(|m| m.to_string()),
            cost: run.solution.cost,
            witness: args
                .witness
                .then(|| run.solution.connections.iter().copied().collect()),
            trace: args.trace.then_some(run.trace),
        });
    };
    for &mode in &modes {
        if wants(Alg::Rs) {
            push(
                "rayward-smith",
                Some(mode),
                rayward_smith_traced(inst, mode)?,
            );
        }
        if wants(Alg::SixPhase) {
            push(
                "six-phase",
                Some(mode),
                six_phase_traced(inst, args.algs.six_phase(mode))?,
            );
        }
    }
    if wants(Alg::Exact) {
        let opt = optimum(inst, args.caps.caps())?;
        results.push(SolveResult {
            algorithm: "exact".into(),
            finishing: None,
            cost: opt.cost,
            witness: args.witness.then(|| opt.witness.iter().copied().collect()),
            trace: None,
        });
    }
    let report = SolveReport {
        schema: "stp12/solve",
        version: stp12::io::report::REPORT_VERSION,
        instance_id: entry.id.clone(),
        nodes: inst.node_count(),
        terminals: inst.terminals().len(),
        results,
    };
    emit(&args.out, &to_json(&report))?;
    Ok(0)
}

fn algorithms(alg: Alg, algs: &AlgArgs) -> Vec<NamedAlgorithm> {
    let mut out = Vec::new();
    for mode in algs.modes() {
        if matches!(alg, Alg::Rs | Alg::All) {
            out.push(rs_algorithm(mode));
        }
        if matches!(alg, Alg::SixPhase | Alg::All) {
            out.push(six_phase_algorithm(algs.six_phase(mode)));
        }
    }
    out
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn run_compare(args: &CompareArgs) -> CliResult<u8> {
    let mut entries = Vec::new();
    for path in &args.inputs {
        entries.push(CorpusEntry {
            id: path.display().to_string(),
            instance: read_instance(path)?,
        });
    }
    for spec in &args.generators {
        let mut parsed: GeneratorSpec = spec.parse()?;
        if !spec.contains("seed=") {
            parsed.seed = args.seed;
        }
        entries.push(CorpusEntry::from_spec(&parsed)?);
    }
    if let Some(n) = args.random {
        entries.extend(random_corpus(args.seed, n));
    }
    if entries.is_empty() {
        return Err(Failure {
            code: EXIT_INPUT,
            message: "no instances: give files, --gen specs or --random N".into(),
        });
    }
    let algs = algorithms(args.alg, &args.algs);
    let result = compare(&entries, &algs, args.caps.caps(), args.trace)?;
    emit(&args.out, &write_report(&result.reports))?;

    for alg in &algs {
        let label = alg.label();
        let max = result
            .reports
            .iter()
            .flat_map(|r| &r.algorithms)
            .filter(|a| a.name == alg.name && a.finishing == alg.finishing.map(|m| m.to_string()))
            .map(|a| stp12::Rational::from(a.ratio))
            .max();
        match max {
            Some(m) => eprintln!("{label}: max ratio {m}"),
            None => eprintln!("{label}: no instances within caps"),
        }
    }
    let skipped = result
        .reports
        .iter()
        .filter(|r| r.skipped.is_some())
        .count();
    if skipped > 0 {
        eprintln!("skipped {skipped} instance(s) over the exact caps");
    }
    if result.counterexamples.is_empty() {
        return Ok(0);
    }
    fs::create_dir_all(&args.counterexamples).map_err(|e| io_failure(&args.counterexamples, e))?;
    for (i, c) in result.counterexamples.iter().enumerate() {
        let path = args
            .counterexamples
            .join(format!("{i:03}-{}.stp", file_safe(&c.algorithm)));
        let name = format!("{} on {}", c.algorithm, c.instance_id);
        fs::write(&path, write_stp(&c.instance, &name)).map_err(|e| io_failure(&path, e))?;
        eprintln!("counterexample: {name} -> {}", path.display());
    }
    Ok(EXIT_FAILURE)
}

fn audit(args: &AuditArgs) -> CliResult<u8> {
    let entry = load(&args.source, args.seed)?;
    let inst = &entry.instance;
    let opt = optimum(inst, args.caps.caps())?;
    let reference = ReferenceSolution::new(inst, opt.witness)?;
    let result = normalize(inst, &reference, args.mode)?;
    let decomposition = decompose(inst, &result.reference);
    let report = AuditReport {
        instance_id: entry.id,
        mode: args.mode.to_string(),
        opt: opt.cost,
        final_cost: result.reference.cost(inst),
        trace: result.trace,
        histogram: decomposition.histogram(),
        normal: decomposition.is_normal(args.mode),
    };
    emit(&args.out, &write_audit_report(&[report]))?;
    Ok(0)
}

fn gen(args: &GenArgs) -> CliResult<u8> {
    let spec = parse_spec(&args.spec, args.seed)?;
    let inst = generate(&spec)?;
    emit(&args.out, &write_stp(&inst, &spec.to_string()))?;
    Ok(0)
}

fn suite(args: &SuiteArgs) -> CliResult<u8> {
    let config = SuiteConfig {
        seed: args.seed,
        random_count: args.random,
        artifact_dir: args.out.as_ref().map(|d| d.join("counterexamples")),
    };
    let wants = |s: SuiteName| args.suite == s || args.suite == SuiteName::All;
    let mut outputs: Vec<(&str, bool, String)> = Vec::new();
    if wants(SuiteName::Rs) {
        let s = suite_ratio_rs(&config)?;
        outputs.push(("ratio-rs", s.passed, s.to_json()));
    }
    if wants(SuiteName::SixPhase) {
        let s = suite_ratio_sixphase(&config)?;
        outputs.push(("ratio-sixphase", s.passed, s.to_json()));
    }
    if wants(SuiteName::Oracles) {
        let s = suite_oracles(&config)?;
        outputs.push(("oracles", s.passed, s.to_json()));
    }
    if wants(SuiteName::Dominance) {
        let s = suite_dominance(&config)?;
        outputs.push(("dominance", s.passed, s.to_json()));
    }
    if wants(SuiteName::Normalization) {
        let s = suite_normalization(&config)?;
        outputs.push(("normalization", s.passed, s.to_json()));
    }
    let mut failed = false;
    for (name, passed, json) in &outputs {
        eprintln!("{name}: {}", if *passed { "PASS" } else { "FAIL" });
        failed |= !passed;
        match &args.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                let path = dir.join(format!("{name}.json"));
                fs::write(&path, json).map_err(|e| io_failure(&path, e))?;
            }
            None => print!("{json}"),
        }
    }
    Ok(if failed { EXIT_FAILURE } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Compare(a) => run_compare(a),
        Command::Audit(a) => audit(a),
        Command::Gen(a) => gen(a),
        Command::Suite(a) => suite(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
