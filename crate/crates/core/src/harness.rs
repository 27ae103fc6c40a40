//! Fixed-seed suites that compare the heuristics against the exact oracles.
//!
//! Every suite returns a serializable summary. Summaries contain no timings,
//! so two runs with the same configuration produce byte-identical JSON.
//! Per-instance work runs in parallel; results are collected in corpus order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::audit::{decompose, normalize, NormalMode, ReferenceSolution};
use crate::error::{Error, Result};
use crate::exact::{brute_force_opt_capped, dreyfus_wagner_capped, optimum, ExactCaps, OptResult};
use crate::heuristics::{rayward_smith_traced, FinishingMode, Run};
use crate::instance::{cost, is_valid_solution, Connection, Instance, Solution};
use crate::io::report::{ratio, AlgorithmResult, RatioReport, RationalJson};
use crate::io::{generate, write_stp, Family, GeneratorSpec};
use crate::matching::{matched_pairs, max_fork_matching, maximum_matching, AuxGraph};
use crate::partition::PartitionState;
use crate::sixphase::{best_comet, cost_index, six_phase_traced, SixPhaseOptions};
use crate::Rational;

pub const DEFAULT_SEED: u64 = 1;
pub const RANDOM_CORPUS_SIZE: usize = 1000;
pub const RANDOM_MAX_NODES: usize = 12;
pub const RANDOM_MAX_TERMINALS: usize = 6;
pub const BP_MAX_DEPTH: usize = 7;
pub const BP_SEEDS_PER_DEPTH: u64 = 2;
/// Node cap for the exact oracles on the corpus; the deepest bp-adversarial
/// instance has 21 nodes.
pub const CORPUS_NODE_CAP: usize = 24;
pub const CORPUS_TERMINAL_CAP: usize = 14;
pub const MATCHING_GRAPHS: usize = 500;
pub const COMET_INSTANCES: usize = 300;
pub const NORMALIZATION_REFERENCES: usize = 200;

/// Exact caps that admit every corpus instance.
pub fn corpus_caps() -> ExactCaps {
    ExactCaps {
        max_nodes: CORPUS_NODE_CAP,
        max_terminals: CORPUS_TERMINAL_CAP,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub instance: Instance,
}

impl CorpusEntry {
    pub fn from_spec(spec: &GeneratorSpec) -> Result<Self> {
        Ok(CorpusEntry {
            id: spec.to_string(),
            instance: generate(spec)?,
        })
    }

    /// Text before the first `:` of the id, e.g. `random-gnp`.
    pub fn family(&self) -> &str {
        self.id.split(':').next().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_count: usize,
    /// Where minimized counterexamples are written; `None` keeps them in the
    /// summary only.
    pub artifact_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            random_count: RANDOM_CORPUS_SIZE,
            artifact_dir: None,
        }
    }
}

const DENSITIES: [(u32, u32); 6] = [(1, 5), (3, 10), (2, 5), (1, 2), (3, 5), (7, 10)];

/// `count` random-gnp instances with at most 12 nodes and 6 terminals.
pub fn random_corpus(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=RANDOM_MAX_NODES);
            let r = rng.gen_range(1..=n.min(RANDOM_MAX_TERMINALS));
            let (p_num, p_den) = *DENSITIES.choose(&mut rng).expect("non-empty");
            let spec = GeneratorSpec::new(Family::RandomGnp { n, p_num, p_den, r }, rng.gen());
            CorpusEntry::from_spec(&spec).expect("valid random spec")
        })
        .collect()
}

fn hand(id: &str, n: usize, edges: &[(usize, usize)], terminals: &[usize]) -> CorpusEntry {
    CorpusEntry {
        id: format!("hand:{id}"),
        instance: Instance::new(n, edges.iter().copied(), terminals.iter().copied())
            .expect("valid hand instance"),
    }
}

/// Star clusters, comet chains and a few small hand-built corner cases.
pub fn gadget_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = vec![
        hand("single-node", 1, &[], &[0]),
        hand("two-isolated", 2, &[], &[0, 1]),
        hand("p3", 3, &[(0, 1), (1, 2)], &[0, 2]),
        hand("triangle", 3, &[(0, 1), (1, 2), (0, 2)], &[0, 1, 2]),
        hand(
            "c5-odd",
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
            &[0, 2, 4],
        ),
        hand(
            "long-path",
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            &[0, 5],
        ),
    ];
    let mut specs = Vec::new();
    for k in 2..=5 {
        for m in 1..=3 {
            specs.push(Family::StarCluster { k, m });
        }
    }
    for a in 0..=3 {
        for b in 0..=4 {
            for count in 1..=2 {
                let f = Family::CometChain { a, b, count };
                let spec = GeneratorSpec::new(f, 0);
                if 2 * a + b >= 2 && spec.declared_size().0 <= 20 {
                    specs.push(f);
                }
            }
        }
    }
    for (i, f) in specs.into_iter().enumerate() {
        let spec = GeneratorSpec::new(f, seed.wrapping_add(i as u64));
        if spec.declared_size().1 > CORPUS_TERMINAL_CAP {
            continue;
        }
        out.push(CorpusEntry::from_spec(&spec).expect("valid gadget spec"));
    }
    out
}

/// bp-adversarial instances for depths `1..=max_depth`.
pub fn bp_sweep(seed: u64, max_depth: usize) -> Vec<CorpusEntry> {
    (1..=max_depth)
        .flat_map(|depth| {
            (0..BP_SEEDS_PER_DEPTH).map(move |s| {
                let spec = GeneratorSpec::new(
                    Family::BpAdversarial { depth },
                    seed.wrapping_mul(31).wrapping_add(depth as u64 * 7 + s),
                );
                CorpusEntry::from_spec(&spec).expect("valid bp spec")
            })
        })
        .collect()
}

/// Random, gadget and bp-adversarial instances together.
pub fn default_corpus(config: &SuiteConfig) -> Vec<CorpusEntry> {
    let mut out = random_corpus(config.seed, config.random_count);
    out.extend(gadget_corpus(config.seed));
    out.extend(bp_sweep(config.seed, BP_MAX_DEPTH));
    out
}

// ---------------------------------------------------------------------------
// Algorithms under test
// ---------------------------------------------------------------------------

pub type AlgorithmFn = dyn Fn(&Instance) -> Result<Run> + Send + Sync;

pub struct NamedAlgorithm {
    pub name: String,
    pub finishing: Option<FinishingMode>,
    pub run: Box<AlgorithmFn>,
}

impl NamedAlgorithm {
    pub fn new(
        name: impl Into<String>,
        finishing: Option<FinishingMode>,
        run: impl Fn(&Instance) -> Result<Run> + Send + Sync + 'static,
    ) -> Self {
        NamedAlgorithm {
            name: name.into(),
            finishing,
            run: Box::new(run),
        }
    }

    pub fn label(&self) -> String {
        match self.finishing {
            Some(m) => format!("{}/{}", self.name, m),
            None => self.name.clone(),
        }
    }
}

pub fn rs_algorithm(mode: FinishingMode) -> NamedAlgorithm {
    NamedAlgorithm::new("rayward-smith", Some(mode), move |i| {
        rayward_smith_traced(i, mode)
    })
}

pub fn six_phase_algorithm(options: SixPhaseOptions) -> NamedAlgorithm {
    let name = match options.pack3 {
        crate::sixphase::Pack3Strategy::Exact => "six-phase",
        crate::sixphase::Pack3Strategy::Greedy => "six-phase-greedy",
    };
    NamedAlgorithm::new(name, Some(options.finishing), move |i| {
        six_phase_traced(i, options)
    })
}

const MODES: [FinishingMode; 2] = [FinishingMode::Cheapest, FinishingMode::StrictPaper];

// ---------------------------------------------------------------------------
// Exact optima and counterexample minimization
// ---------------------------------------------------------------------------

/// Optimum within `caps`, or `None` when the instance is refused.
fn capped_opt(instance: &Instance, caps: ExactCaps) -> Result<Option<OptResult>> {
    match optimum(instance, caps) {
        Ok(r) => Ok(Some(r)),
        Err(e) if e.is_cap_exceeded() => Ok(None),
        Err(e) => Err(e),
    }
}

fn corpus_opt(instance: &Instance) -> Result<Option<OptResult>> {
    capped_opt(instance, corpus_caps())
}

/// Deletes nodes one at a time, keeping a deletion whenever `still_bad`
/// holds for the smaller instance, until no single deletion keeps it.
pub fn minimize(instance: &Instance, still_bad: impl Fn(&Instance) -> bool) -> Instance {
    let mut current = instance.clone();
    'outer: loop {
        for v in 0..current.node_count() {
            if let Ok(smaller) = current.without_node(v) {
                if !smaller.terminals().is_empty() && still_bad(&smaller) {
                    current = smaller;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

/// Whether `algorithm` exceeds `bound` (or misbehaves) on `instance`.
fn violates(algorithm: &NamedAlgorithm, instance: &Instance, bound: Rational) -> bool {
    violates_capped(algorithm, instance, bound, corpus_caps())
}

fn violates_capped(
    algorithm: &NamedAlgorithm,
    instance: &Instance,
    bound: Rational,
    caps: ExactCaps,
) -> bool {
    let Ok(Some(opt)) = capped_opt(instance, caps) else {
        return false;
    };
    match (algorithm.run)(instance) {
        Ok(run) => match check_run(instance, &run.solution, opt.cost) {
            Ok(r) => r > bound,
            Err(_) => true,
        },
        Err(_) => true,
    }
}

/// Ratio of a solution after checking it is valid and its cost is honest.
fn check_run(instance: &Instance, solution: &Solution, opt: u64) -> Result<Rational> {
    if !is_valid_solution(instance, &solution.connections) {
        return Err(Error::contract("solution does not connect the terminals"));
    }
    let actual = cost(instance, &solution.connections)?;
    if actual != solution.cost {
        return Err(Error::contract(format!(
            "reported cost {} but connections cost {actual}",
            solution.cost
        )));
    }
    ratio(actual, opt)
}

// ---------------------------------------------------------------------------
// Ratio suites
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub instance_id: String,
    pub cost: Option<u64>,
    pub opt: u64,
    pub ratio: Option<RationalJson>,
    pub error: Option<String>,
    pub minimized_nodes: usize,
    pub minimized_terminals: usize,
    /// Minimized instance in STP format.
    pub minimized_stp: String,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub max_ratio: RationalJson,
    pub argmax: Option<String>,
    /// Maximum ratio per instance family.
    pub family_max: BTreeMap<String, RationalJson>,
    pub violations: Vec<Violation>,
}

impl AlgorithmSummary {
    pub fn max_ratio(&self) -> Rational {
        self.max_ratio.into()
    }

    pub fn family_max(&self, family: &str) -> Option<Rational> {
        self.family_max.get(family).map(|&r| r.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioSuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub bound: RationalJson,
    pub instances: usize,
    pub skipped: Vec<String>,
    pub warnings: Vec<String>,
    pub algorithms: Vec<AlgorithmSummary>,
    pub passed: bool,
}

impl RatioSuiteSummary {
    pub fn algorithm(&self, label: &str) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == label)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialize");
    s.push('\n');
    s
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

enum Outcome {
    Ratio(u64, Rational),
    Failed(String),
}

/// Runs `algorithms` on every corpus instance and checks `cost / opt <= bound`.
/// Violations are minimized by node deletion and, when `config.artifact_dir`
/// is set, written there as `.stp` files.
pub fn ratio_suite(
    suite: &str,
    corpus: &[CorpusEntry],
    algorithms: &[NamedAlgorithm],
    bound: Rational,
    config: &SuiteConfig,
) -> Result<RatioSuiteSummary> {
    let evaluated: Vec<(Option<u64>, Vec<Outcome>)> = corpus
        .par_iter()
        .map(|entry| {
            let opt = match corpus_opt(&entry.instance) {
                Ok(Some(o)) => o.cost,
                Ok(None) => return Ok((None, Vec::new())),
                Err(e) => return Err(e),
            };
            let outcomes = algorithms
                .iter()
                .map(|alg| match (alg.run)(&entry.instance) {
                    Ok(run) => match check_run(&entry.instance, &run.solution, opt) {
                        Ok(r) => Outcome::Ratio(run.solution.cost, r),
                        Err(e) => Outcome::Failed(e.to_string()),
                    },
                    Err(e) => Outcome::Failed(e.to_string()),
                })
                .collect();
            Ok((Some(opt), outcomes))
        })
        .collect::<Result<_>>()?;

    let mut warnings = Vec::new();
    if corpus.is_empty() {
        warnings.push("empty corpus: pass is vacuous".to_string());
    }
    let skipped: Vec<String> = corpus
        .iter()
        .zip(&evaluated)
        .filter(|(_, (opt, _))| opt.is_none())
        .map(|(e, _)| e.id.clone())
        .collect();

    let mut summaries = Vec::new();
    for (ai, alg) in algorithms.iter().enumerate() {
        let mut max = Rational::from_integer(1);
        let mut argmax = None;
        let mut family_max: BTreeMap<String, Rational> = BTreeMap::new();
        let mut violations = Vec::new();
        for (entry, (opt, outcomes)) in corpus.iter().zip(&evaluated) {
            let Some(opt) = *opt else { continue };
            let (cost, r, error) = match &outcomes[ai] {
                Outcome::Ratio(c, r) => (Some(*c), Some(*r), None),
                Outcome::Failed(e) => (None, None, Some(e.clone())),
            };
            if let Some(r) = r {
                if r > max || argmax.is_none() {
                    if r > max {
                        max = r;
                    }
                    if argmax.is_none() || r >= max {
                        argmax = Some(entry.id.clone());
                    }
                }
                let f = family_max.entry(entry.family().to_string()).or_insert(r);
                *f = (*f).max(r);
            }
            if error.is_some() || r.is_some_and(|r| r > bound) {
                let small = minimize(&entry.instance, |i| violates(alg, i, bound));
                let name = format!("{}: {} on {}", suite, alg.label(), entry.id);
                let stp = write_stp(&small, &name);
                let artifact = match &config.artifact_dir {
                    Some(dir) => {
                        fs::create_dir_all(dir)
                            .map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
                        let path = dir.join(format!(
                            "{}-{}-{}.stp",
                            file_safe(suite),
                            file_safe(&alg.label()),
                            violations.len()
                        ));
                        fs::write(&path, &stp)
                            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
                        Some(path.display().to_string())
                    }
                    None => None,
                };
                violations.push(Violation {
                    instance_id: entry.id.clone(),
                    cost,
                    opt,
                    ratio: r.map(Into::into),
                    error,
                    minimized_nodes: small.node_count(),
                    minimized_terminals: small.terminals().len(),
                    minimized_stp: stp,
                    artifact,
                });
            }
        }
        summaries.push(AlgorithmSummary {
            algorithm: alg.label(),
            max_ratio: max.into(),
            argmax,
            family_max: family_max.into_iter().map(|(k, v)| (k, v.into())).collect(),
            violations,
        });
    }
    let passed = summaries.iter().all(|s| s.violations.is_empty());
    Ok(RatioSuiteSummary {
        suite: suite.to_string(),
        seed: config.seed,
        bound: bound.into(),
        instances: corpus.len(),
        skipped,
        warnings,
        algorithms: summaries,
        passed,
    })
}

/// Rayward-Smith in both finishing modes against 4/3.
pub fn suite_ratio_rs(config: &SuiteConfig) -> Result<RatioSuiteSummary> {
    let algs: Vec<_> = MODES.iter().map(|&m| rs_algorithm(m)).collect();
    ratio_suite(
        "ratio-rs",
        &default_corpus(config),
        &algs,
        Rational::new(4, 3),
        config,
    )
}

/// Six-phase in both finishing modes against 5/4.
pub fn suite_ratio_sixphase(config: &SuiteConfig) -> Result<RatioSuiteSummary> {
    let algs: Vec<_> = MODES
        .iter()
        .map(|&m| six_phase_algorithm(SixPhaseOptions::new(m)))
        .collect();
    ratio_suite(
        "ratio-sixphase",
        &default_corpus(config),
        &algs,
        Rational::new(5, 4),
        config,
    )
}

// ---------------------------------------------------------------------------
// Per-instance comparison
// ---------------------------------------------------------------------------

/// Proven approximation bound for an algorithm name, if any.
pub fn ratio_bound(name: &str) -> Option<Rational> {
    match name {
        "rayward-smith" => Some(Rational::new(4, 3)),
        "six-phase" | "six-phase-greedy" => Some(Rational::new(5, 4)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub instance_id: String,
    pub algorithm: String,
    /// The violating instance after minimization.
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub reports: Vec<RatioReport>,
    pub counterexamples: Vec<Counterexample>,
}

/// Runs every algorithm on every entry and reports exact ratios. Entries
/// the exact oracles refuse under `caps` are reported as skipped. Ratios
/// above an algorithm's proven bound are flagged and the instance is
/// minimized into a counterexample.
pub fn compare(
    entries: &[CorpusEntry],
    algorithms: &[NamedAlgorithm],
    caps: ExactCaps,
    keep_traces: bool,
) -> Result<Comparison> {
    let evaluated: Vec<(RatioReport, Vec<Counterexample>)> = entries
        .par_iter()
        .map(|entry| {
            let inst = &entry.instance;
            let mut report = RatioReport {
                instance_id: entry.id.clone(),
                nodes: inst.node_count(),
                terminals: inst.terminals().len(),
                opt: None,
                skipped: None,
                algorithms: Vec::new(),
                flags: Vec::new(),
            };
            let opt = match optimum(inst, caps) {
                Ok(o) => o.cost,
                Err(e) if e.is_cap_exceeded() => {
                    report.skipped = Some(e.to_string());
                    return Ok((report, Vec::new()));
                }
                Err(e) => return Err(e),
            };
            report.opt = Some(opt);
            let mut found = Vec::new();
            for alg in algorithms {
                let run = (alg.run)(inst)?;
                let r = check_run(inst, &run.solution, opt)?;
                if let Some(bound) = ratio_bound(&alg.name).filter(|&b| r > b) {
                    report
                        .flags
                        .push(format!("{} ratio {r} exceeds {bound}", alg.label()));
                    found.push(Counterexample {
                        instance_id: entry.id.clone(),
                        algorithm: alg.label(),
                        instance: minimize(inst, |i| violates_capped(alg, i, bound, caps)),
                    });
                }
                report.algorithms.push(AlgorithmResult {
                    name: alg.name.clone(),
                    finishing: alg.finishing.map(|m| m.to_string()),
                    cost: run.solution.cost,
                    ratio: r.into(),
                    trace: if keep_traces { run.trace } else { Vec::new() },
                });
            }
            Ok((report, found))
        })
        .collect::<Result<_>>()?;
    let mut reports = Vec::with_capacity(evaluated.len());
    let mut counterexamples = Vec::new();
    for (r, c) in evaluated {
        reports.push(r);
        counterexamples.extend(c);
    }
    Ok(Comparison {
        reports,
        counterexamples,
    })
}

// ---------------------------------------------------------------------------
// Dominance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn new(check: &str, cases: usize, failures: Vec<String>) -> Self {
        CheckSummary {
            check: check.to_string(),
            cases,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

impl CheckSuiteSummary {
    fn new(suite: &str, seed: u64, checks: Vec<CheckSummary>) -> Self {
        let warnings = checks
            .iter()
            .filter(|c| c.cases == 0)
            .map(|c| format!("{}: no cases, pass is vacuous", c.check))
            .collect();
        let passed = checks.iter().all(CheckSummary::passed);
        CheckSuiteSummary {
            suite: suite.to_string(),
            seed,
            warnings,
            checks,
            passed,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Per instance: cheapest finishing never costs more than strict-paper
/// finishing, and no algorithm beats the optimum.
pub fn suite_dominance(config: &SuiteConfig) -> Result<CheckSuiteSummary> {
    let corpus = default_corpus(config);
    let failures: Vec<Vec<String>> = corpus
        .par_iter()
        .map(|entry| {
            let inst = &entry.instance;
            let mut out = Vec::new();
            let Some(opt) = corpus_opt(inst)? else {
                return Ok(vec![format!("{}: refused by exact caps", entry.id)]);
            };
            let mut costs = BTreeMap::new();
            for m in MODES {
                let rs = rayward_smith_traced(inst, m)?.solution.cost;
                let sp = six_phase_traced(inst, SixPhaseOptions::new(m))?
                    .solution
                    .cost;
                costs.insert(("rs", m), rs);
                costs.insert(("six-phase", m), sp);
            }
            for (&(name, m), &c) in &costs {
                if c < opt.cost {
                    out.push(format!(
                        "{}: {name}/{m} cost {c} below opt {}",
                        entry.id, opt.cost
                    ));
                }
            }
            for name in ["rs", "six-phase"] {
                let cheap = costs[&(name, FinishingMode::Cheapest)];
                let strict = costs[&(name, FinishingMode::StrictPaper)];
                if cheap > strict {
                    out.push(format!(
                        "{}: {name} cheapest {cheap} > strict {strict}",
                        entry.id
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let check = CheckSummary::new("dominance", corpus.len(), failures.concat());
    Ok(CheckSuiteSummary::new(
        "dominance",
        config.seed,
        vec![check],
    ))
}

// ---------------------------------------------------------------------------
// Oracle agreement
// ---------------------------------------------------------------------------

pub type OracleFn = dyn Fn(&Instance) -> Result<OptResult> + Send + Sync;

/// Compares two exact oracles by cost and checks both witnesses.
pub fn oracle_agreement(
    corpus: &[CorpusEntry],
    a: &OracleFn,
    b: &OracleFn,
) -> Result<CheckSummary> {
    let failures: Vec<Option<String>> = corpus
        .par_iter()
        .map(|entry| {
            let inst = &entry.instance;
            let (ra, rb) = (a(inst)?, b(inst)?);
            for r in [&ra, &rb] {
                if !is_valid_solution(inst, &r.witness) || cost(inst, &r.witness)? != r.cost {
                    return Ok(Some(format!(
                        "{}: witness inconsistent with cost {}",
                        entry.id, r.cost
                    )));
                }
            }
            Ok((ra.cost != rb.cost).then(|| {
                format!(
                    "{}: {} vs {}\n{}",
                    entry.id,
                    ra.cost,
                    rb.cost,
                    write_stp(inst, &entry.id)
                )
            }))
        })
        .collect::<Result<_>>()?;
    Ok(CheckSummary::new(
        "dreyfus-wagner = brute-force",
        corpus.len(),
        failures.into_iter().flatten().collect(),
    ))
}

/// Maximum matching size by exhaustive search over subsets of vertices.
pub fn exhaustive_matching_size(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![0u64; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut memo = vec![usize::MAX; 1 << n];
    fn go(free: u64, adj: &[u64], memo: &mut [usize]) -> usize {
        if free == 0 {
            return 0;
        }
        if memo[free as usize] != usize::MAX {
            return memo[free as usize];
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = go(rest, adj, memo);
        let mut nb = adj[v] & rest;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            best = best.max(1 + go(rest & !(1 << u), adj, memo));
        }
        memo[free as usize] = best;
        best
    }
    go((1u64 << n) - 1, &adj, &mut memo)
}

fn petersen() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    e
}

/// A named graph on `0..n` given by its edge list.
pub type MatchingCase = (String, usize, Vec<(usize, usize)>);

/// Random graphs plus odd cycles, blossom gadgets and the Petersen graph.
pub fn matching_corpus(seed: u64, count: usize) -> Vec<MatchingCase> {
    let mut out = vec![("petersen".to_string(), 10, petersen())];
    for len in [3, 5, 7, 9, 11] {
        let e = (0..len).map(|i| (i, (i + 1) % len)).collect();
        out.push((format!("odd-cycle-{len}"), len, e));
    }
    // two triangles joined by a path, and a flower of three triangles
    out.push((
        "blossom-pair".into(),
        8,
        vec![
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (5, 7),
        ],
    ));
    out.push((
        "flower".into(),
        7,
        vec![
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (3, 4),
            (0, 4),
            (0, 5),
            (5, 6),
            (0, 6),
        ],
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_7463);
    for i in 0..count {
        let n = rng.gen_range(1..=12);
        let (pn, pd) = *DENSITIES.choose(&mut rng).expect("non-empty");
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_ratio(pn, pd) {
                    e.push((u, v));
                }
            }
        }
        out.push((format!("random-{i}"), n, e));
    }
    out
}

fn check_matching(id: &str, n: usize, edges: &[(usize, usize)]) -> Option<String> {
    let mate = maximum_matching(n, edges);
    let pairs = matched_pairs(&mate);
    let edge_set: BTreeSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for (v, m) in mate.iter().enumerate() {
        if let Some(u) = *m {
            if mate[u] != Some(v) || !edge_set.contains(&(u.min(v), u.max(v))) {
                return Some(format!("{id}: mate array is not a matching of the graph"));
            }
        }
    }
    let expected = exhaustive_matching_size(n, edges);
    (pairs.len() != expected)
        .then(|| format!("{id}: blossom {} vs exhaustive {expected}", pairs.len()))
}

/// Exhaustive maximum over fork-disjoint matchings: tries every assignment
/// of each fork to at most one of its pairs.
pub fn exhaustive_fork_matching_size(graph: &AuxGraph) -> usize {
    let forks: Vec<(usize, Vec<usize>)> = graph
        .fork_nodes()
        .map(|f| (f, graph.reach(f).collect()))
        .collect();
    fn go(i: usize, used: &mut BTreeSet<usize>, forks: &[(usize, Vec<usize>)]) -> usize {
        if i == forks.len() {
            return 0;
        }
        let mut best = go(i + 1, used, forks);
        let reach = &forks[i].1;
        for (x, &a) in reach.iter().enumerate() {
            for &b in &reach[x + 1..] {
                if !used.contains(&a) && !used.contains(&b) {
                    used.insert(a);
                    used.insert(b);
                    best = best.max(1 + go(i + 1, used, forks));
                    used.remove(&a);
                    used.remove(&b);
                }
            }
        }
        best
    }
    go(0, &mut BTreeSet::new(), &forks)
}

fn fork_matching_checks(seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x666f_726b);
    let mut failures = Vec::new();
    for i in 0..count {
        let terminals = rng.gen_range(2..=8);
        let forks = rng.gen_range(1..=5);
        let mut g = AuxGraph::new();
        for t in 0..terminals {
            g.add_vertex(t);
        }
        for f in 0..forks {
            let reach: Vec<usize> = (0..terminals).filter(|_| rng.gen_bool(0.4)).collect();
            g.add_fork(100 + f, reach);
        }
        let m = max_fork_matching(&g);
        let expected = exhaustive_fork_matching_size(&g);
        if !m.is_vertex_disjoint() || !m.is_fork_disjoint() || m.len() != expected {
            failures.push(format!(
                "fork-random-{i}: {} vs exhaustive {expected}",
                m.len()
            ));
        }
    }
    failures
}

/// Minimum cost index over every star and comet of the partition, found by
/// enumerating centers, direct terminal sets and fork assignments.
pub fn exhaustive_best_cost_index(instance: &Instance, state: &PartitionState) -> Option<Rational> {
    let comps: Vec<usize> = state.components().collect();
    let members: BTreeMap<usize, Vec<usize>> =
        comps.iter().map(|&c| (c, state.members(c))).collect();
    let adjacent = |a: usize, b: usize| {
        members[&a]
            .iter()
            .any(|&x| members[&b].iter().any(|&y| instance.is_edge(x, y)))
    };
    let terms: Vec<usize> = comps
        .iter()
        .copied()
        .filter(|&c| state.is_terminal_component(c))
        .collect();
    let mut best: Option<Rational> = None;
    for &c in comps.iter().filter(|&&c| !state.is_terminal_component(c)) {
        let direct: Vec<usize> = terms.iter().copied().filter(|&t| adjacent(c, t)).collect();
        let forks: Vec<(usize, Vec<usize>)> = comps
            .iter()
            .copied()
            .filter(|&f| f != c && !state.is_terminal_component(f) && adjacent(c, f))
            .map(|f| {
                (
                    f,
                    terms.iter().copied().filter(|&t| adjacent(f, t)).collect(),
                )
            })
            .collect();
        for mask in 0..1u32 << direct.len() {
            let mut used: BTreeSet<usize> = direct
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &t)| t)
                .collect();
            let b = used.len() as i64;
            enumerate_forks(0, &forks, &mut used, 0, &mut |a: i64| {
                let t = 2 * a + b;
                if t >= 2 {
                    let ci = Rational::new(3 * a + b, t - 1) - 1;
                    if best.is_none_or(|x| ci < x) {
                        best = Some(ci);
                    }
                }
            });
        }
    }
    best
}

fn enumerate_forks(
    i: usize,
    forks: &[(usize, Vec<usize>)],
    used: &mut BTreeSet<usize>,
    a: i64,
    visit: &mut dyn FnMut(i64),
) {
    if i == forks.len() {
        visit(a);
        return;
    }
    enumerate_forks(i + 1, forks, used, a, visit);
    let reach = &forks[i].1;
    for (x, &p) in reach.iter().enumerate() {
        for &q in &reach[x + 1..] {
            if !used.contains(&p) && !used.contains(&q) {
                used.insert(p);
                used.insert(q);
                enumerate_forks(i + 1, forks, used, a + 1, visit);
                used.remove(&p);
                used.remove(&q);
            }
        }
    }
}

/// Instances for the comet search check: random graphs with up to 12 nodes
/// and up to 8 terminals, denser than the ratio corpus.
pub fn comet_corpus(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f_6d65);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=12);
            let r = rng.gen_range(1..=n.min(8));
            let (p_num, p_den) = *DENSITIES.choose(&mut rng).expect("non-empty");
            let spec = GeneratorSpec::new(Family::RandomGnp { n, p_num, p_den, r }, rng.gen());
            CorpusEntry::from_spec(&spec).expect("valid random spec")
        })
        .collect()
}

fn check_best_comet(entry: &CorpusEntry) -> Result<Vec<String>> {
    let inst = &entry.instance;
    let mut out = Vec::new();
    // the initial partition and the one after merging terminal edges
    let initial = PartitionState::new(inst);
    let mut merged = initial.clone();
    crate::heuristics::preprocess_terminal_edges(inst, &mut merged)?;
    for (label, state) in [("initial", initial), ("merged", merged)] {
        let expected = exhaustive_best_cost_index(inst, &state);
        let got = match best_comet(inst, &state) {
            Some(s) => {
                if s.terminal_count() < 2 {
                    out.push(format!(
                        "{} ({label}): structure with < 2 terminals",
                        entry.id
                    ));
                }
                Some(s.cost_index()?.value())
            }
            None => None,
        };
        if got != expected {
            out.push(format!(
                "{} ({label}): best_comet {:?} vs exhaustive {:?}",
                entry.id,
                got.map(|r| r.to_string()),
                expected.map(|r| r.to_string())
            ));
        }
    }
    Ok(out)
}

/// Exact cost index closed forms for stars (`2 <= s <= 50`) and comets
/// (`0 <= a, b <= 20`, `2a + b >= 2`).
pub fn cost_index_check() -> Result<CheckSummary> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for s in 2..=50i64 {
        cases += 1;
        let got = cost_index(s as usize, s as usize)?.value();
        if got != Rational::new(1, s - 1) {
            failures.push(format!("{s}-star: {got}"));
        }
    }
    for a in 0..=20i64 {
        for b in 0..=20i64 {
            if 2 * a + b < 2 {
                continue;
            }
            cases += 1;
            let got = cost_index((2 * a + b) as usize, (3 * a + b) as usize)?.value();
            if got != Rational::new(a + 1, 2 * a + b - 1) {
                failures.push(format!("({a},{b})-comet: {got}"));
            }
        }
    }
    Ok(CheckSummary::new(
        "cost-index closed forms",
        cases,
        failures,
    ))
}

/// Exact oracles against each other, blossom matching against exhaustive
/// search, best_comet against exhaustive structure enumeration, and the cost
/// index closed forms.
pub fn suite_oracles(config: &SuiteConfig) -> Result<CheckSuiteSummary> {
    let corpus = default_corpus(config);
    let bf = |i: &Instance| brute_force_opt_capped(i, CORPUS_NODE_CAP);
    let dw = |i: &Instance| dreyfus_wagner_capped(i, CORPUS_TERMINAL_CAP);
    let dw_check = oracle_agreement(&corpus, &dw, &bf)?;

    let graphs = matching_corpus(config.seed, MATCHING_GRAPHS);
    let matching_failures: Vec<String> = graphs
        .par_iter()
        .filter_map(|(id, n, e)| check_matching(id, *n, e))
        .collect();
    let matching = CheckSummary::new(
        "blossom = exhaustive matching",
        graphs.len(),
        matching_failures,
    );
    let fork_count = MATCHING_GRAPHS / 5;
    let forks = CheckSummary::new(
        "fork matching = exhaustive",
        fork_count,
        fork_matching_checks(config.seed, fork_count),
    );

    let comets = comet_corpus(config.seed, COMET_INSTANCES);
    let comet_failures: Vec<Vec<String>> = comets
        .par_iter()
        .map(check_best_comet)
        .collect::<Result<_>>()?;
    let comet = CheckSummary::new(
        "best_comet = exhaustive",
        comets.len(),
        comet_failures.concat(),
    );

    Ok(CheckSuiteSummary::new(
        "oracles",
        config.seed,
        vec![cost_index_check()?, dw_check, matching, forks, comet],
    ))
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Optimal references for an instance: both oracle witnesses and the
/// witness found on a randomly relabelled copy, mapped back.
pub fn optimal_references(entry: &CorpusEntry, seed: u64) -> Result<Vec<ReferenceSolution>> {
    let inst = &entry.instance;
    let mut sets: BTreeSet<BTreeSet<Connection>> = BTreeSet::new();
    sets.insert(brute_force_opt_capped(inst, CORPUS_NODE_CAP)?.witness);
    sets.insert(dreyfus_wagner_capped(inst, CORPUS_TERMINAL_CAP)?.witness);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..inst.node_count()).collect();
    perm.shuffle(&mut rng);
    let mut inverse = vec![0; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inverse[p] = v;
    }
    let relabelled = inst.relabel(&perm)?;
    let w = brute_force_opt_capped(&relabelled, CORPUS_NODE_CAP)?.witness;
    sets.insert(
        w.iter()
            .map(|c| {
                let (a, b) = c.endpoints();
                Connection::new(inverse[a], inverse[b])
            })
            .collect::<Result<_>>()?,
    );
    sets.into_iter()
        .map(|s| ReferenceSolution::new(inst, s))
        .collect()
}

/// Normalizes `reference` and checks the shape postcondition, validity after
/// every step, and that the trace deltas add up to the final cost.
pub fn check_normalization(
    instance: &Instance,
    reference: &ReferenceSolution,
    mode: NormalMode,
) -> std::result::Result<(), String> {
    let result = normalize(instance, reference, mode).map_err(|e| e.to_string())?;
    let mut current = reference.connections().clone();
    let mut running = reference.cost(instance) as i64;
    for (i, step) in result.trace.iter().enumerate() {
        for c in &step.removed {
            if !current.remove(c) {
                return Err(format!("step {i} removes absent {c}"));
            }
        }
        current.extend(step.added.iter().copied());
        if !is_valid_solution(instance, &current) {
            return Err(format!("step {i} ({:?}) breaks validity", step.kind));
        }
        running += step.cost_delta;
        if cost(instance, &current).map_err(|e| e.to_string())? as i64 != running {
            return Err(format!("step {i} cost delta does not match"));
        }
    }
    if &current != result.reference.connections() {
        return Err("trace replay differs from the final reference".into());
    }
    let decomposition = decompose(instance, &result.reference);
    if !decomposition.is_normal(mode) {
        return Err(format!("not normal: {:?}", decomposition.histogram()));
    }
    Ok(())
}

/// Normalizes optimal references of corpus instances in both modes.
pub fn suite_normalization(config: &SuiteConfig) -> Result<CheckSuiteSummary> {
    let corpus: Vec<CorpusEntry> = default_corpus(config)
        .into_iter()
        .filter(|e| e.instance.terminals().len() >= 2)
        .collect();
    let results: Vec<(usize, Vec<String>)> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let refs = optimal_references(entry, config.seed.wrapping_add(i as u64))?;
            let mut failures = Vec::new();
            for (r, reference) in refs.iter().enumerate() {
                for mode in [NormalMode::S3, NormalMode::S4] {
                    if let Err(e) = check_normalization(&entry.instance, reference, mode) {
                        failures.push(format!("{} ref {r} {mode}: {e}", entry.id));
                    }
                }
            }
            Ok((refs.len(), failures))
        })
        .collect::<Result<_>>()?;
    let references = results.iter().map(|r| r.0).sum();
    let failures = results.into_iter().flat_map(|r| r.1).collect();
    let mut check = CheckSummary::new("normalization postconditions", references, failures);
    if references < NORMALIZATION_REFERENCES {
        check.failures.push(format!(
            "only {references} references, need {NORMALIZATION_REFERENCES}"
        ));
    }
    Ok(CheckSuiteSummary::new(
        "normalization",
        config.seed,
        vec![check],
    ))
}
