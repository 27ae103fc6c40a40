//! The three-step greedy (Rayward-Smith style): collapse terminal–terminal
//! edges, repeatedly collapse the largest star while it has at least three
//! leaves, then connect what is left.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Connection, Instance, Solution};
use crate::partition::{induced_graph, ComponentGraph, PartitionState};

/// A non-terminal center component joined by representative edges to
/// terminal components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    /// Leaf component ids, ascending.
    pub leaves: Vec<usize>,
    /// `edges[i]` joins the center to `leaves[i]`.
    pub edges: Vec<Connection>,
}

impl Star {
    pub fn size(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_proper(&self) -> bool {
        self.size() >= 3
    }

    /// Center followed by leaves.
    pub fn components(&self) -> Vec<usize> {
        std::iter::once(self.center)
            .chain(self.leaves.iter().copied())
            .collect()
    }
}

/// How the leftover terminal components are joined at the end.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum FinishingMode {
    /// Only non-edges, as the algorithm is stated.
    StrictPaper,
    /// Representative edges between terminal components first, then non-edges.
    #[default]
    Cheapest,
}

impl FinishingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FinishingMode::StrictPaper => "strict-paper",
            FinishingMode::Cheapest => "cheapest",
        }
    }
}

impl fmt::Display for FinishingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FinishingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict-paper" | "strict" => Ok(FinishingMode::StrictPaper),
            "cheapest" => Ok(FinishingMode::Cheapest),
            _ => Err(Error::invalid(format!("unknown finishing mode {s:?}"))),
        }
    }
}

/// One collapse performed by an algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub phase: String,
    /// Short structure tag such as `edge`, `star(4)`, `comet(1,3)`, `link`.
    pub structure: String,
    pub center: Option<usize>,
    pub cost: u64,
}

pub type Trace = Vec<TraceStep>;

/// A solution together with the collapses that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub solution: Solution,
    pub trace: Trace,
}

pub(crate) fn record(
    trace: &mut Trace,
    phase: &str,
    structure: String,
    center: Option<usize>,
    cost: u64,
) {
    trace.push(TraceStep {
        phase: phase.to_string(),
        structure,
        center,
        cost,
    });
}

/// Terminal components adjacent to non-terminal component `c`, with representatives.
pub(crate) fn terminal_neighbors(
    graph: &ComponentGraph,
    state: &PartitionState,
    c: usize,
) -> Vec<(usize, Connection)> {
    graph
        .neighbors(c)
        .filter(|&(d, _)| state.is_terminal_component(d))
        .collect()
}

fn star_at(graph: &ComponentGraph, state: &PartitionState, c: usize) -> Star {
    let (leaves, edges) = terminal_neighbors(graph, state, c).into_iter().unzip();
    Star {
        center: c,
        leaves,
        edges,
    }
}

/// Largest star over all terminal-free components; ties go to the smallest center.
pub fn find_max_star(instance: &Instance, state: &PartitionState) -> Option<Star> {
    max_star_in(&induced_graph(instance, state), state)
}

pub(crate) fn max_star_in(graph: &ComponentGraph, state: &PartitionState) -> Option<Star> {
    let mut best: Option<Star> = None;
    for &c in graph.components() {
        if state.is_terminal_component(c) {
            continue;
        }
        let star = star_at(graph, state, c);
        if star.size() > best.as_ref().map_or(0, Star::size) {
            best = Some(star);
        }
    }
    best
}

pub(crate) fn collapse_star(
    instance: &Instance,
    state: &mut PartitionState,
    star: &Star,
) -> Result<u64> {
    let before = state.cost();
    state.collapse(instance, &star.components(), &star.edges)?;
    Ok(state.cost() - before)
}

/// Collapses every edge joining two terminals in different components, in
/// lexicographic order. Returns the number of collapses.
pub fn preprocess_terminal_edges(instance: &Instance, state: &mut PartitionState) -> Result<usize> {
    preprocess_traced(instance, state, &mut Vec::new(), "preprocess")
}

pub(crate) fn preprocess_traced(
    instance: &Instance,
    state: &mut PartitionState,
    trace: &mut Trace,
    phase: &str,
) -> Result<usize> {
    let mut count = 0;
    for (u, v) in instance.edges() {
        if !(instance.is_terminal(u) && instance.is_terminal(v)) {
            continue;
        }
        let (a, b) = (state.component_of(u), state.component_of(v));
        if a != b {
            state.collapse(instance, &[a, b], &[Connection::pair(u, v)])?;
            record(trace, phase, "edge".into(), None, 1);
            count += 1;
        }
    }
    Ok(count)
}

/// Smallest non-adjacent pair between the terminals of `a` and `b`; falls back
/// to any non-adjacent node pair, then to the smallest terminal pair.
fn linking_pair(instance: &Instance, state: &PartitionState, a: usize, b: usize) -> Connection {
    let ma = state.members(a);
    let mb = state.members(b);
    let ta: Vec<usize> = ma
        .iter()
        .copied()
        .filter(|&v| instance.is_terminal(v))
        .collect();
    let tb: Vec<usize> = mb
        .iter()
        .copied()
        .filter(|&v| instance.is_terminal(v))
        .collect();
    let smallest_non_edge = |xs: &[usize], ys: &[usize]| {
        xs.iter()
            .flat_map(|&x| ys.iter().map(move |&y| Connection::pair(x, y)))
            .filter(|c| {
                let (x, y) = c.endpoints();
                !instance.is_edge(x, y)
            })
            .min()
    };
    smallest_non_edge(&ta, &tb)
        .or_else(|| smallest_non_edge(&ma, &mb))
        .unwrap_or_else(|| Connection::pair(ta[0], tb[0]))
}

/// Joins the remaining terminal components into one and returns the full
/// solution accumulated in `state`.
pub fn finishing(
    instance: &Instance,
    state: &mut PartitionState,
    mode: FinishingMode,
) -> Result<Solution> {
    finishing_traced(instance, state, mode, &mut Vec::new())
}

pub(crate) fn finishing_traced(
    instance: &Instance,
    state: &mut PartitionState,
    mode: FinishingMode,
    trace: &mut Trace,
) -> Result<Solution> {
    if mode == FinishingMode::Cheapest {
        let graph = induced_graph(instance, state);
        for (a, b, rep) in graph.edges() {
            if !(state.is_terminal_component(a) && state.is_terminal_component(b)) {
                continue;
            }
            let (ca, cb) = (state.component_of(a), state.component_of(b));
            if ca != cb {
                state.collapse(instance, &[ca, cb], &[rep])?;
                record(trace, "finishing", "edge".into(), None, 1);
            }
        }
    }
    let terminals = state.terminal_components();
    for pair in terminals.windows(2) {
        let (a, b) = (state.component_of(pair[0]), state.component_of(pair[1]));
        if a == b {
            continue;
        }
        let link = linking_pair(instance, state, a, b);
        let (x, y) = link.endpoints();
        state.collapse(instance, &[a, b], &[link])?;
        record(
            trace,
            "finishing",
            "link".into(),
            None,
            instance.distance(x, y),
        );
    }
    Ok(state.to_solution())
}

/// Greedy with default (cheapest) finishing.
pub fn rayward_smith(instance: &Instance, mode: FinishingMode) -> Result<Solution> {
    rayward_smith_traced(instance, mode).map(|r| r.solution)
}

pub fn rayward_smith_traced(instance: &Instance, mode: FinishingMode) -> Result<Run> {
    if instance.terminals().is_empty() {
        return Err(Error::NoTerminals);
    }
    let mut state = PartitionState::new(instance);
    let mut trace = Vec::new();
    preprocess_traced(instance, &mut state, &mut trace, "preprocess")?;
    loop {
        let graph = induced_graph(instance, &state);
        match max_star_in(&graph, &state) {
            Some(star) if star.size() >= 3 => {
                let cost = collapse_star(instance, &mut state, &star)?;
                record(
                    &mut trace,
                    "greedy",
                    format!("star({})", star.size()),
                    Some(star.center),
                    cost,
                );
            }
            _ => break,
        }
    }
    let solution = finishing_traced(instance, &mut state, mode, &mut trace)?;
    Ok(Run { solution, trace })
}
