//! Negative controls: the suites must be able to fail.

use std::collections::BTreeSet;

use stp12::exact::{brute_force_opt, dreyfus_wagner, OptResult};
use stp12::harness::{
    gadget_corpus, oracle_agreement, random_corpus, ratio_suite, rs_algorithm, six_phase_algorithm,
    CorpusEntry, NamedAlgorithm, SuiteConfig,
};
use stp12::heuristics::Run;
use stp12::io::parse_stp;
use stp12::sixphase::SixPhaseOptions;
use stp12::{Connection, FinishingMode, Instance, Rational, Solution};

/// Chains the terminals in id order, paying 2 for every non-adjacent pair.
fn terminal_chain(inst: &Instance) -> stp12::Result<Run> {
    let t = inst.terminals();
    let conns: BTreeSet<Connection> = t
        .windows(2)
        .map(|w| Connection::new(w[0], w[1]))
        .collect::<stp12::Result<_>>()?;
    Ok(Run {
        solution: Solution::new(inst, conns)?,
        trace: Vec::new(),
    })
}

/// Star clusters with proper stars (k >= 3).
fn star_clusters() -> Vec<CorpusEntry> {
    gadget_corpus(1)
        .into_iter()
        .filter(|e| e.family() == "star-cluster" && !e.id.contains("k=2,"))
        .collect()
}

#[test]
fn chain_stub_fails_and_dumps_minimized_instance() {
    let dir = std::env::temp_dir().join(format!("stp12-controls-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let config = SuiteConfig {
        artifact_dir: Some(dir.clone()),
        ..SuiteConfig::default()
    };
    let stub = NamedAlgorithm::new("terminal-chain", None, terminal_chain);
    let s = ratio_suite(
        "control",
        &star_clusters(),
        &[stub],
        Rational::new(4, 3),
        &config,
    )
    .unwrap();
    assert!(!s.passed);
    let alg = &s.algorithms[0];
    assert!(alg.max_ratio() > Rational::new(4, 3));
    let v = &alg.violations[0];
    let path = v.artifact.as_ref().unwrap();
    let inst = parse_stp(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(inst.node_count(), v.minimized_nodes);
    // two 3-stars joined by a bridge: 10/7, and no single deletion keeps it above 4/3
    assert_eq!(inst.node_count(), 8);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn real_algorithms_are_exact_on_star_clusters() {
    let s = ratio_suite(
        "control",
        &star_clusters(),
        &[
            rs_algorithm(FinishingMode::Cheapest),
            rs_algorithm(FinishingMode::StrictPaper),
            six_phase_algorithm(SixPhaseOptions::new(FinishingMode::Cheapest)),
            six_phase_algorithm(SixPhaseOptions::new(FinishingMode::StrictPaper)),
        ],
        Rational::new(4, 3),
        &SuiteConfig::default(),
    )
    .unwrap();
    assert!(s.passed);
    // strict-paper finishing links packed 3-stars by non-edges instead of
    // their bridges, so only cheapest finishing is exact here
    for a in s
        .algorithms
        .iter()
        .filter(|a| a.algorithm.ends_with("cheapest"))
    {
        assert_eq!(a.max_ratio(), Rational::from_integer(1), "{}", a.algorithm);
    }
}

#[test]
fn invalid_solutions_are_violations() {
    let empty = NamedAlgorithm::new("empty", None, |inst: &Instance| {
        Ok(Run {
            solution: Solution::new(inst, BTreeSet::new())?,
            trace: Vec::new(),
        })
    });
    let s = ratio_suite(
        "control",
        &star_clusters(),
        &[empty],
        Rational::new(4, 3),
        &SuiteConfig::default(),
    )
    .unwrap();
    assert!(!s.passed);
    assert!(s.algorithms[0].violations[0].error.is_some());
}

#[test]
fn empty_corpus_is_vacuous_with_warning() {
    let s = ratio_suite(
        "control",
        &[],
        &[rs_algorithm(FinishingMode::Cheapest)],
        Rational::new(4, 3),
        &SuiteConfig::default(),
    )
    .unwrap();
    assert!(s.passed);
    assert_eq!(s.warnings.len(), 1);
}

#[test]
fn mutated_dreyfus_wagner_is_caught() {
    // an off-by-one in the merge step shows up as +1 whenever three or more
    // terminals have to be joined
    let mutated = |inst: &Instance| -> stp12::Result<OptResult> {
        let mut r = dreyfus_wagner(inst)?;
        if inst.terminals().len() >= 3 {
            r.cost += 1;
        }
        Ok(r)
    };
    let corpus = random_corpus(5, 100);
    let c = oracle_agreement(&corpus, &mutated, &brute_force_opt).unwrap();
    assert!(!c.passed());
    let good = oracle_agreement(&corpus, &dreyfus_wagner, &brute_force_opt).unwrap();
    assert!(good.passed(), "{:?}", good.failures);
}

#[test]
fn single_node_instances_agree() {
    let corpus = vec![CorpusEntry {
        id: "n1".into(),
        instance: Instance::new(1, [], [0]).unwrap(),
    }];
    assert!(oracle_agreement(&corpus, &dreyfus_wagner, &brute_force_opt)
        .unwrap()
        .passed());
}
