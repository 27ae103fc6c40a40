//! The six-phase star/comet algorithm.
//!
//! 1. collapse terminal–terminal edges;
//! 2. greedily collapse stars with more than four leaves;
//! 3. greedily collapse 4-stars;
//! 4. pick a maximum set of disjoint 3-stars;
//! 5. upgrade selected 3-stars to (1,3)-comets where a free fork exists,
//!    then collapse the selection;
//! 6. collapse the star or comet of least cost index while it is below 1;
//!
//! then finish as the greedy does.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::{
    collapse_star, finishing_traced, max_star_in, preprocess_traced, record, terminal_neighbors,
    FinishingMode, Run, Star,
};
use crate::instance::{Connection, Instance, Solution};
use crate::matching::{max_fork_matching, AuxGraph};
use crate::partition::{induced_graph, ComponentGraph, PartitionState};
use crate::Rational;

pub const DEFAULT_PACK3_CAP: usize = 64;

/// `c / (t - 1) - 1` for a structure with `t` terminals and `c` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CostIndex(Rational);

impl CostIndex {
    pub fn value(self) -> Rational {
        self.0
    }

    /// The index of merging two components with one non-edge.
    pub fn non_edge() -> Self {
        CostIndex(Rational::from_integer(1))
    }
}

impl fmt::Display for CostIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn cost_index(terminals: usize, edges: usize) -> Result<CostIndex> {
    if terminals < 2 {
        return Err(Error::invalid(format!(
            "cost index needs at least 2 terminals, got {terminals}"
        )));
    }
    let t = terminals as i64;
    let c = edges as i64;
    Ok(CostIndex(Rational::new(c, t - 1) - 1))
}

/// A non-terminal joined to the comet center and to two terminal components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fork {
    pub node: usize,
    pub leaves: [usize; 2],
    /// center–fork, fork–leaves[0], fork–leaves[1]
    pub edges: [Connection; 3],
}

/// Center with `a` forks and `b` directly attached terminal components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comet {
    pub center: usize,
    pub forks: Vec<Fork>,
    pub direct: Vec<usize>,
    pub direct_edges: Vec<Connection>,
}

impl Comet {
    pub fn a(&self) -> usize {
        self.forks.len()
    }

    pub fn b(&self) -> usize {
        self.direct.len()
    }
}

/// A candidate for collapse: a star or a comet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Star(Star),
    Comet(Comet),
}

impl Structure {
    pub fn center(&self) -> usize {
        match self {
            Structure::Star(s) => s.center,
            Structure::Comet(c) => c.center,
        }
    }

    pub fn terminal_count(&self) -> usize {
        match self {
            Structure::Star(s) => s.size(),
            Structure::Comet(c) => 2 * c.a() + c.b(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Structure::Star(s) => s.size(),
            Structure::Comet(c) => 3 * c.a() + c.b(),
        }
    }

    pub fn cost_index(&self) -> Result<CostIndex> {
        cost_index(self.terminal_count(), self.edge_count())
    }

    /// Every component the structure touches, center first.
    pub fn components(&self) -> Vec<usize> {
        match self {
            Structure::Star(s) => s.components(),
            Structure::Comet(c) => {
                let mut out = vec![c.center];
                out.extend(&c.direct);
                for f in &c.forks {
                    out.push(f.node);
                    out.extend(f.leaves);
                }
                out
            }
        }
    }

    /// Terminal components joined by the structure.
    pub fn terminal_components(&self) -> Vec<usize> {
        match self {
            Structure::Star(s) => s.leaves.clone(),
            Structure::Comet(c) => {
                let mut out = c.direct.clone();
                out.extend(c.forks.iter().flat_map(|f| f.leaves));
                out
            }
        }
    }

    pub fn edges(&self) -> Vec<Connection> {
        match self {
            Structure::Star(s) => s.edges.clone(),
            Structure::Comet(c) => {
                let mut out = c.direct_edges.clone();
                out.extend(c.forks.iter().flat_map(|f| f.edges));
                out
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Structure::Star(s) => format!("star({})", s.size()),
            Structure::Comet(c) => format!("comet({},{})", c.a(), c.b()),
        }
    }
}

/// Largest set of forks at `center` using distinct fork nodes and distinct
/// terminal components from `allowed`.
fn max_forks(
    graph: &ComponentGraph,
    state: &PartitionState,
    center: usize,
    allowed: &BTreeSet<usize>,
    blocked: &BTreeSet<usize>,
) -> Vec<Fork> {
    let mut aux = AuxGraph::new();
    for (f, _) in graph.neighbors(center) {
        if state.is_terminal_component(f) || blocked.contains(&f) {
            continue;
        }
        let reach: Vec<usize> = terminal_neighbors(graph, state, f)
            .into_iter()
            .map(|(t, _)| t)
            .filter(|t| allowed.contains(t))
            .collect();
        if reach.len() >= 2 {
            aux.add_fork(f, reach);
        }
    }
    max_fork_matching(&aux)
        .edges
        .into_iter()
        .map(|e| make_fork(graph, center, e.fork, e.a, e.b))
        .collect()
}

fn make_fork(graph: &ComponentGraph, center: usize, node: usize, a: usize, b: usize) -> Fork {
    let rep = |x, y| graph.representative(x, y).expect("adjacent components");
    Fork {
        node,
        leaves: [a, b],
        edges: [rep(center, node), rep(node, a), rep(node, b)],
    }
}

fn comet_or_star(center: usize, direct: Vec<(usize, Connection)>, forks: Vec<Fork>) -> Structure {
    let (direct, direct_edges): (Vec<_>, Vec<_>) = direct.into_iter().unzip();
    if forks.is_empty() {
        Structure::Star(Star {
            center,
            leaves: direct,
            edges: direct_edges,
        })
    } else {
        Structure::Comet(Comet {
            center,
            forks,
            direct,
            direct_edges,
        })
    }
}

/// Orders by (cost index, more terminals first, smaller center).
fn better(a: &Structure, b: &Structure) -> bool {
    let key = |s: &Structure| {
        (
            s.cost_index().expect("t >= 2"),
            std::cmp::Reverse(s.terminal_count()),
            s.center(),
        )
    };
    key(a) < key(b)
}

/// Star or comet of minimum cost index, over every terminal-free center.
///
/// With three or more direct terminals the full star is optimal (a comet
/// with `b >= 3` has index at least `1/(b-1)`; one with `b <= 2` exceeds
/// `1/2`), and at exactly three the `(a,3)`-comet ties it with more
/// terminals. Otherwise every subset of the direct terminals is tried with
/// the maximum fork set over the remaining terminal components, since for
/// fixed `b <= 2` the index strictly decreases in `a`.
pub fn best_comet(instance: &Instance, state: &PartitionState) -> Option<Structure> {
    best_comet_in(&induced_graph(instance, state), state)
}

fn best_comet_in(graph: &ComponentGraph, state: &PartitionState) -> Option<Structure> {
    let terminals: BTreeSet<usize> = state.terminal_components().into_iter().collect();
    let none = BTreeSet::new();
    let mut best: Option<Structure> = None;
    let mut offer = |s: Structure| {
        if s.terminal_count() >= 2 && best.as_ref().is_none_or(|b| better(&s, b)) {
            best = Some(s);
        }
    };
    for &c in graph.components() {
        if state.is_terminal_component(c) {
            continue;
        }
        let direct = terminal_neighbors(graph, state, c);
        if direct.len() >= 3 {
            if direct.len() == 3 {
                let allowed = &terminals - &direct.iter().map(|&(t, _)| t).collect();
                let forks = max_forks(graph, state, c, &allowed, &none);
                offer(comet_or_star(c, direct.clone(), forks));
            }
            offer(comet_or_star(c, direct, Vec::new()));
            continue;
        }
        for mask in (0..1u32 << direct.len()).rev() {
            let chosen: Vec<(usize, Connection)> = direct
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &d)| d)
                .collect();
            let allowed = &terminals - &chosen.iter().map(|&(t, _)| t).collect();
            let forks = max_forks(graph, state, c, &allowed, &none);
            offer(comet_or_star(c, chosen, forks));
        }
    }
    best
}

/// How phase 4 packs disjoint 3-stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pack3Strategy {
    /// Maximum cardinality by branch and bound, refused above the candidate cap.
    #[default]
    Exact,
    /// Maximal set in candidate order.
    Greedy,
}

impl Pack3Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Pack3Strategy::Exact => "exact",
            Pack3Strategy::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Pack3Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pack3Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Pack3Strategy::Exact),
            "greedy" => Ok(Pack3Strategy::Greedy),
            _ => Err(Error::invalid(format!(
                "unknown 3-star packing strategy {s:?}"
            ))),
        }
    }
}

fn three_star_candidates(graph: &ComponentGraph, state: &PartitionState) -> Vec<Star> {
    let mut out = Vec::new();
    for &c in graph.components() {
        if state.is_terminal_component(c) {
            continue;
        }
        let d = terminal_neighbors(graph, state, c);
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                for k in j + 1..d.len() {
                    out.push(Star {
                        center: c,
                        leaves: vec![d[i].0, d[j].0, d[k].0],
                        edges: vec![d[i].1, d[j].1, d[k].1],
                    });
                }
            }
        }
    }
    out
}

/// Set of 3-stars pairwise disjoint on centers and terminal components.
pub fn max_3star_set(
    instance: &Instance,
    state: &PartitionState,
    strategy: Pack3Strategy,
    candidate_cap: usize,
) -> Result<Vec<Star>> {
    max_3star_set_in(
        &induced_graph(instance, state),
        state,
        strategy,
        candidate_cap,
    )
}

fn max_3star_set_in(
    graph: &ComponentGraph,
    state: &PartitionState,
    strategy: Pack3Strategy,
    candidate_cap: usize,
) -> Result<Vec<Star>> {
    let candidates = three_star_candidates(graph, state);
    match strategy {
        Pack3Strategy::Greedy => {
            let mut used = BTreeSet::new();
            Ok(candidates
                .into_iter()
                .filter(|s| {
                    let parts = s.components();
                    if parts.iter().any(|p| used.contains(p)) {
                        false
                    } else {
                        used.extend(parts);
                        true
                    }
                })
                .collect())
        }
        Pack3Strategy::Exact => {
            if candidates.len() > candidate_cap {
                return Err(Error::CapExceeded {
                    what: "3-star candidates",
                    limit: candidate_cap,
                    actual: candidates.len(),
                    hint: "; use the greedy packing strategy",
                });
            }
            let mut search = Packing {
                candidates: &candidates,
                used: BTreeSet::new(),
                chosen: Vec::new(),
                best: Vec::new(),
            };
            let leaves: BTreeSet<usize> = candidates
                .iter()
                .flat_map(|s| s.leaves.iter().copied())
                .collect();
            search.run(0, leaves.len());
            Ok(search.best.iter().map(|&i| candidates[i].clone()).collect())
        }
    }
}

struct Packing<'a> {
    candidates: &'a [Star],
    used: BTreeSet<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Packing<'_> {
    fn run(&mut self, from: usize, free_leaves: usize) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let remaining = self.candidates.len() - from;
        if self.chosen.len() + remaining.min(free_leaves / 3) <= self.best.len() {
            return;
        }
        for i in from..self.candidates.len() {
            let parts = self.candidates[i].components();
            if parts.iter().any(|p| self.used.contains(p)) {
                continue;
            }
            self.used.extend(parts.iter().copied());
            self.chosen.push(i);
            self.run(i + 1, free_leaves - 3);
            self.chosen.pop();
            for p in &parts {
                self.used.remove(p);
            }
            let left = self.candidates.len() - i - 1;
            if self.chosen.len() + left.min(free_leaves / 3) <= self.best.len() {
                return;
            }
        }
    }
}

/// Replaces, in order, each selected 3-star whose center reaches a fork node
/// with two terminal components untouched by the selection by the
/// corresponding (1,3)-comet.
pub fn upgrade_to_comets(
    instance: &Instance,
    state: &PartitionState,
    selected: &[Star],
) -> Vec<Structure> {
    upgrade_in(&induced_graph(instance, state), state, selected)
}

fn upgrade_in(graph: &ComponentGraph, state: &PartitionState, selected: &[Star]) -> Vec<Structure> {
    let mut touched: BTreeSet<usize> = selected.iter().flat_map(Star::components).collect();
    let mut out = Vec::with_capacity(selected.len());
    for star in selected {
        let mut upgraded = None;
        for (f, _) in graph.neighbors(star.center) {
            if state.is_terminal_component(f) || touched.contains(&f) {
                continue;
            }
            let free: Vec<usize> = terminal_neighbors(graph, state, f)
                .into_iter()
                .map(|(t, _)| t)
                .filter(|t| !touched.contains(t))
                .take(2)
                .collect();
            if free.len() == 2 {
                let fork = make_fork(graph, star.center, f, free[0], free[1]);
                touched.extend([f, free[0], free[1]]);
                upgraded = Some(Structure::Comet(Comet {
                    center: star.center,
                    forks: vec![fork],
                    direct: star.leaves.clone(),
                    direct_edges: star.edges.clone(),
                }));
                break;
            }
        }
        out.push(upgraded.unwrap_or_else(|| Structure::Star(star.clone())));
    }
    out
}

fn collapse_structure(
    instance: &Instance,
    state: &mut PartitionState,
    s: &Structure,
) -> Result<u64> {
    let before = state.cost();
    state.collapse(instance, &s.components(), &s.edges())?;
    Ok(state.cost() - before)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SixPhaseOptions {
    pub finishing: FinishingMode,
    pub pack3: Pack3Strategy,
    pub pack3_cap: Option<usize>,
}

impl SixPhaseOptions {
    pub fn new(finishing: FinishingMode) -> Self {
        SixPhaseOptions {
            finishing,
            ..Default::default()
        }
    }
}

pub fn six_phase(instance: &Instance, options: SixPhaseOptions) -> Result<Solution> {
    six_phase_traced(instance, options).map(|r| r.solution)
}

pub fn six_phase_traced(instance: &Instance, options: SixPhaseOptions) -> Result<Run> {
    if instance.terminals().is_empty() {
        return Err(Error::NoTerminals);
    }
    let mut state = PartitionState::new(instance);
    let mut trace = Vec::new();

    preprocess_traced(instance, &mut state, &mut trace, "phase1")?;

    for (phase, keep) in [
        ("phase2", (|s: usize| s > 4) as fn(usize) -> bool),
        // collapsing a 4-star can create a larger star; phase 3 takes it too
        ("phase3", |s: usize| s >= 4),
    ] {
        loop {
            let graph = induced_graph(instance, &state);
            match max_star_in(&graph, &state) {
                Some(star) if keep(star.size()) => {
                    let cost = collapse_star(instance, &mut state, &star)?;
                    record(
                        &mut trace,
                        phase,
                        format!("star({})", star.size()),
                        Some(star.center),
                        cost,
                    );
                }
                _ => break,
            }
        }
    }

    let graph = induced_graph(instance, &state);
    let cap = options.pack3_cap.unwrap_or(DEFAULT_PACK3_CAP);
    let selected = max_3star_set_in(&graph, &state, options.pack3, cap)?;
    let phase4 = format!("phase4-{}", options.pack3);
    for s in upgrade_in(&graph, &state, &selected) {
        let cost = collapse_structure(instance, &mut state, &s)?;
        let phase = if matches!(s, Structure::Comet(_)) {
            "phase5"
        } else {
            phase4.as_str()
        };
        record(&mut trace, phase, s.label(), Some(s.center()), cost);
    }

    loop {
        let graph = induced_graph(instance, &state);
        match best_comet_in(&graph, &state) {
            Some(s) if s.cost_index()? < CostIndex::non_edge() => {
                let cost = collapse_structure(instance, &mut state, &s)?;
                record(&mut trace, "phase6", s.label(), Some(s.center()), cost);
            }
            _ => break,
        }
    }

    let solution = finishing_traced(instance, &mut state, options.finishing, &mut trace)?;
    Ok(Run { solution, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn cost_index_examples() {
        assert_eq!(cost_index(4, 4).unwrap().value(), r(1, 3));
        assert_eq!(cost_index(5, 6).unwrap().value(), r(1, 2));
        assert_eq!(cost_index(2, 1).unwrap().value(), r(0, 1));
        assert_eq!(cost_index(2, 2).unwrap(), CostIndex::non_edge());
        assert!(cost_index(1, 3).is_err());
    }

    /// center 0; direct terminals 1, 2; fork 3 with terminals 4, 5
    fn one_two_comet() -> Instance {
        Instance::new(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)], [1, 2, 4, 5]).unwrap()
    }

    #[test]
    fn best_comet_prefers_comet_over_two_star() {
        let inst = one_two_comet();
        let best = best_comet(&inst, &PartitionState::new(&inst)).unwrap();
        assert_eq!(best.label(), "comet(1,2)");
        assert_eq!(best.cost_index().unwrap().value(), r(2, 3));
    }

    #[test]
    fn best_comet_prefers_four_star() {
        // center 0 with 4 direct terminals and a fork 5 -> {6, 7}
        let inst = Instance::new(
            8,
            [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (5, 6), (5, 7)],
            [1, 2, 3, 4, 6, 7],
        )
        .unwrap();
        let best = best_comet(&inst, &PartitionState::new(&inst)).unwrap();
        assert_eq!(best.label(), "star(4)");
        assert_eq!(best.cost_index().unwrap().value(), r(1, 3));
    }

    #[test]
    fn best_comet_absent_without_terminal_neighbors() {
        let inst = Instance::new(4, [(0, 1), (2, 3)], [2, 3]).unwrap();
        let mut state = PartitionState::new(&inst);
        crate::heuristics::preprocess_terminal_edges(&inst, &mut state).unwrap();
        assert!(best_comet(&inst, &state).is_none());
    }

    #[test]
    fn three_star_packing() {
        // two disjoint gadgets
        let inst = Instance::new(
            8,
            [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7)],
            [1, 2, 3, 5, 6, 7],
        )
        .unwrap();
        let state = PartitionState::new(&inst);
        for strategy in [Pack3Strategy::Exact, Pack3Strategy::Greedy] {
            assert_eq!(max_3star_set(&inst, &state, strategy, 64).unwrap().len(), 2);
        }
        // sharing terminal 3
        let inst = Instance::new(
            7,
            [(0, 1), (0, 2), (0, 3), (4, 3), (4, 5), (4, 6)],
            [1, 2, 3, 5, 6],
        )
        .unwrap();
        let state = PartitionState::new(&inst);
        assert_eq!(
            max_3star_set(&inst, &state, Pack3Strategy::Exact, 64)
                .unwrap()
                .len(),
            1
        );
        assert!(max_3star_set(&inst, &state, Pack3Strategy::Exact, 1)
            .unwrap_err()
            .is_cap_exceeded());
    }

    #[test]
    fn exact_packing_beats_greedy_order() {
        // center 0 -> {1,2,3}; center 4 -> {1,5,6}; center 7 -> {3,8,9}
        // greedy takes 0 first and blocks both others; exact takes 4 and 7.
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (4, 1),
            (4, 5),
            (4, 6),
            (7, 3),
            (7, 8),
            (7, 9),
        ];
        let inst = Instance::new(10, edges, [1, 2, 3, 5, 6, 8, 9]).unwrap();
        let state = PartitionState::new(&inst);
        let greedy = max_3star_set(&inst, &state, Pack3Strategy::Greedy, 64).unwrap();
        let exact = max_3star_set(&inst, &state, Pack3Strategy::Exact, 64).unwrap();
        assert_eq!((greedy.len(), exact.len()), (1, 2));
        assert_eq!(
            exact.iter().map(|s| s.center).collect::<Vec<_>>(),
            vec![4, 7]
        );
    }

    #[test]
    fn upgrade_examples() {
        // 3-star at 0 with fork 4 -> {5, 6}
        let inst = Instance::new(
            7,
            [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6)],
            [1, 2, 3, 5, 6],
        )
        .unwrap();
        let state = PartitionState::new(&inst);
        let sel = max_3star_set(&inst, &state, Pack3Strategy::Exact, 64).unwrap();
        let up = upgrade_to_comets(&inst, &state, &sel);
        assert_eq!(up.len(), 1);
        assert_eq!(up[0].label(), "comet(1,3)");

        let inst = Instance::new(4, [(0, 1), (0, 2), (0, 3)], [1, 2, 3]).unwrap();
        let state = PartitionState::new(&inst);
        let sel = max_3star_set(&inst, &state, Pack3Strategy::Exact, 64).unwrap();
        assert_eq!(upgrade_to_comets(&inst, &state, &sel)[0].label(), "star(3)");
    }

    #[test]
    fn upgrade_competition_first_wins() {
        // stars at 0 {1,2,3} and 4 {5,6,7}; shared fork 8 -> {9,10}
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (4, 5),
            (4, 6),
            (4, 7),
            (0, 8),
            (4, 8),
            (8, 9),
            (8, 10),
        ];
        let inst = Instance::new(11, edges, [1, 2, 3, 5, 6, 7, 9, 10]).unwrap();
        let state = PartitionState::new(&inst);
        let sel = max_3star_set(&inst, &state, Pack3Strategy::Exact, 64).unwrap();
        let up = upgrade_to_comets(&inst, &state, &sel);
        let labels: Vec<_> = up.iter().map(Structure::label).collect();
        assert_eq!(labels, vec!["comet(1,3)", "star(3)"]);
        let mut seen = BTreeSet::new();
        assert!(up
            .iter()
            .flat_map(Structure::components)
            .all(|c| seen.insert(c)));
    }

    #[test]
    fn six_phase_examples() {
        let opts = SixPhaseOptions::default();
        for n in 3..8 {
            let inst = Instance::new(n + 1, (1..=n).map(|t| (0, t)), 1..=n).unwrap();
            assert_eq!(six_phase(&inst, opts).unwrap().cost, n as u64);
        }
        // (1,3)-comet: center 0, terminals 1..3, fork 4 -> {5, 6}
        let inst = Instance::new(
            7,
            [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6)],
            [1, 2, 3, 5, 6],
        )
        .unwrap();
        let run = six_phase_traced(&inst, opts).unwrap();
        assert_eq!(run.solution.cost, 6);
        assert!(run.trace.iter().any(|s| s.structure == "comet(1,3)"));
        let p3 = Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap();
        assert_eq!(six_phase(&p3, opts).unwrap().cost, 2);
        assert_eq!(six_phase(&one_two_comet(), opts).unwrap().cost, 5);
    }
}
