//! Structural normalization of a reference solution: decomposition into
//! connected components (C-comps) and Steiner components (S-comps) of the
//! edge part `T = T* ∩ E`, their classification, and the Path and Bridge
//! steps that rewrite `T*` until every S-comp is a star (or comet).
//!
//! References are kept in a canonical form: `T` plus a spanning tree of
//! terminal pairs, preferring non-edges, over the terminal-bearing components
//! of `(V, T)`. Steps edit `T` and re-derive the spanning tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{cost, is_valid_solution, Connection, Instance};
use crate::union_find::UnionFind;

/// A valid solution used as the reference `T*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSolution {
    connections: BTreeSet<Connection>,
}

impl ReferenceSolution {
    pub fn new(instance: &Instance, connections: BTreeSet<Connection>) -> Result<Self> {
        if !is_valid_solution(instance, &connections) {
            return Err(Error::contract(
                "reference solution does not connect the terminals",
            ));
        }
        Ok(ReferenceSolution { connections })
    }

    pub fn connections(&self) -> &BTreeSet<Connection> {
        &self.connections
    }

    /// `T = T* ∩ E`.
    pub fn tree_edges(&self, instance: &Instance) -> BTreeSet<Connection> {
        self.connections
            .iter()
            .copied()
            .filter(|c| {
                let (u, v) = c.endpoints();
                instance.is_edge(u, v)
            })
            .collect()
    }

    pub fn cost(&self, instance: &Instance) -> u64 {
        cost(instance, &self.connections).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    TerminalEdge,
    Star { s: usize },
    Comet { a: usize, b: usize },
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::TerminalEdge => write!(f, "terminal-edge"),
            Classification::Star { s } => write!(f, "star({s})"),
            Classification::Comet { a, b } => write!(f, "comet({a},{b})"),
            Classification::Other => write!(f, "other"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerComponent {
    pub nodes: BTreeSet<usize>,
    pub edges: Vec<Connection>,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub s_comps: Vec<SteinerComponent>,
    /// Node sets of the connected components of `(V, T)` with at least one edge.
    pub c_comps: Vec<BTreeSet<usize>>,
}

impl Decomposition {
    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for s in &self.s_comps {
            *h.entry(s.classification.to_string()).or_insert(0) += 1;
        }
        h
    }

    /// Whether every S-comp has a shape allowed after normalization in `mode`.
    pub fn is_normal(&self, mode: NormalMode) -> bool {
        self.s_comps.iter().all(|s| match s.classification {
            Classification::TerminalEdge => true,
            Classification::Star { s } => s >= 3,
            Classification::Comet { a, b } => mode == NormalMode::S4 && a + b > 2,
            Classification::Other => false,
        })
    }
}

fn adjacency(edges: &BTreeSet<Connection>) -> BTreeMap<usize, Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in edges {
        let (u, v) = e.endpoints();
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    adj
}

/// Classifies one S-comp given its edges.
pub fn classify(instance: &Instance, edges: &[Connection]) -> Classification {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in edges {
        let (u, v) = e.endpoints();
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    if adj.len() != edges.len() + 1 {
        return Classification::Other;
    }
    let inner: Vec<usize> = adj
        .keys()
        .copied()
        .filter(|&v| !instance.is_terminal(v))
        .collect();
    if inner.is_empty() {
        return if edges.len() == 1 {
            Classification::TerminalEdge
        } else {
            Classification::Other
        };
    }
    if adj
        .iter()
        .any(|(&v, n)| instance.is_terminal(v) && n.len() != 1)
    {
        return Classification::Other;
    }
    if inner.len() == 1 {
        return Classification::Star {
            s: adj[&inner[0]].len(),
        };
    }
    let is_fork = |f: usize, center: usize| {
        let n = &adj[&f];
        n.len() == 3
            && n.contains(&center)
            && n.iter().filter(|&&x| instance.is_terminal(x)).count() == 2
    };
    for &center in &inner {
        let others_are_forks = inner.iter().all(|&f| f == center || is_fork(f, center));
        if others_are_forks {
            let b = adj[&center]
                .iter()
                .filter(|&&x| instance.is_terminal(x))
                .count();
            return Classification::Comet {
                a: inner.len() - 1,
                b,
            };
        }
    }
    Classification::Other
}

/// Splits `T` into S-comps (edges grouped through shared non-terminals) and C-comps.
pub fn decompose(instance: &Instance, reference: &ReferenceSolution) -> Decomposition {
    let t: Vec<Connection> = reference.tree_edges(instance).into_iter().collect();
    let mut groups = UnionFind::new(t.len());
    let mut first_at: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, e) in t.iter().enumerate() {
        let (u, v) = e.endpoints();
        for x in [u, v] {
            if instance.is_terminal(x) {
                continue;
            }
            match first_at.get(&x) {
                Some(&j) => {
                    groups.union(i, j);
                }
                None => {
                    first_at.insert(x, i);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<Connection>> = BTreeMap::new();
    for (i, e) in t.iter().enumerate() {
        by_root.entry(groups.find(i)).or_default().push(*e);
    }
    let s_comps = by_root
        .into_values()
        .map(|edges| SteinerComponent {
            nodes: edges
                .iter()
                .flat_map(|e| {
                    let (u, v) = e.endpoints();
                    [u, v]
                })
                .collect(),
            classification: classify(instance, &edges),
            edges,
        })
        .collect();

    let mut uf = UnionFind::new(instance.node_count());
    for e in &t {
        let (u, v) = e.endpoints();
        uf.union(u, v);
    }
    let mut comps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for e in &t {
        let (u, v) = e.endpoints();
        let r = uf.find(u);
        comps.entry(r).or_default().extend([u, v]);
    }
    Decomposition {
        s_comps,
        c_comps: comps.into_values().collect(),
    }
}

/// Which normal form to reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalMode {
    /// Proper stars and terminal edges only.
    #[default]
    S3,
    /// Stars and comets; Bridge Steps need three `T`-edges on both sides.
    S4,
}

impl fmt::Display for NormalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalMode::S3 => "s3",
            NormalMode::S4 => "s4",
        })
    }
}

impl FromStr for NormalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s3" => Ok(NormalMode::S3),
            "s4" => Ok(NormalMode::S4),
            _ => Err(Error::invalid(format!("unknown normalization mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// Re-derive the non-edge chain (first step only, when it changes anything).
    Relink,
    /// Drop the edge of a non-terminal leaf.
    Prune,
    Path,
    Bridge,
}

/// One normalization step; applying `removed`/`added` to the previous
/// connection set yields the next one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub removed: Vec<Connection>,
    pub added: Vec<Connection>,
    pub cost_delta: i64,
}

/// `T` plus a spanning tree over its terminal-bearing components, built
/// Kruskal-style from terminal pairs: non-edges first, each group in
/// lexicographic order. A terminal edge is used only when two groups of
/// components cannot be joined by any non-edge.
fn canonical(instance: &Instance, tree: &BTreeSet<Connection>) -> BTreeSet<Connection> {
    let mut uf = UnionFind::new(instance.node_count());
    for e in tree {
        let (u, v) = e.endpoints();
        uf.union(u, v);
    }
    let terminals = instance.terminals();
    let mut links: Vec<(bool, Connection)> = Vec::new();
    for (i, &x) in terminals.iter().enumerate() {
        for &y in &terminals[i + 1..] {
            if !uf.same(x, y) {
                links.push((instance.is_edge(x, y), Connection::pair(x, y)));
            }
        }
    }
    links.sort();
    let mut out = tree.clone();
    for (_, link) in links {
        let (x, y) = link.endpoints();
        if uf.union(x, y) {
            out.insert(link);
        }
    }
    out
}

fn make_step(
    instance: &Instance,
    kind: StepKind,
    before: &ReferenceSolution,
    after: BTreeSet<Connection>,
) -> (ReferenceSolution, Step) {
    let removed = before.connections.difference(&after).copied().collect();
    let added = after.difference(&before.connections).copied().collect();
    let next = ReferenceSolution { connections: after };
    let delta = next.cost(instance) as i64 - before.cost(instance) as i64;
    debug_assert!(is_valid_solution(instance, &next.connections));
    (
        next,
        Step {
            kind,
            removed,
            added,
            cost_delta: delta,
        },
    )
}

fn apply_removal(
    instance: &Instance,
    reference: &ReferenceSolution,
    kind: StepKind,
    remove: &[Connection],
) -> Result<(ReferenceSolution, Step)> {
    let mut tree = reference.tree_edges(instance);
    for e in remove {
        tree.remove(e);
    }
    let after = canonical(instance, &tree);
    Ok(make_step(instance, kind, reference, after))
}

/// Maximal paths of `k > 1` edges of `T` whose interior nodes are
/// non-terminals of `T`-degree 2 and whose ends are terminals or nodes of
/// `T`-degree above 2, in lexicographic order.
pub fn path_candidates(instance: &Instance, reference: &ReferenceSolution) -> Vec<Vec<usize>> {
    let adj = adjacency(&reference.tree_edges(instance));
    let degree = |v: usize| adj.get(&v).map_or(0, Vec::len);
    let interior = |v: usize| !instance.is_terminal(v) && degree(v) == 2;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (&v, nbrs) in &adj {
        if !interior(v) || seen.contains(&v) {
            continue;
        }
        let mut halves = Vec::new();
        let mut closed = false;
        for &start in nbrs {
            let mut half = Vec::new();
            let (mut prev, mut cur) = (v, start);
            while interior(cur) && cur != v {
                half.push(cur);
                let next = adj[&cur]
                    .iter()
                    .copied()
                    .find(|&x| x != prev)
                    .expect("degree 2");
                prev = cur;
                cur = next;
            }
            if cur == v {
                closed = true;
            }
            half.push(cur);
            halves.push(half);
        }
        let mut path: Vec<usize> = halves[0].iter().rev().copied().collect();
        path.push(v);
        path.extend(&halves[1]);
        seen.extend(path[1..path.len() - 1].iter().copied());
        let (a, b) = (path[0], path[path.len() - 1]);
        let good_end = |x: usize| instance.is_terminal(x) || degree(x) > 2;
        if closed || a == b || !good_end(a) || !good_end(b) {
            continue;
        }
        if a > b {
            path.reverse();
        }
        out.push(path);
    }
    out.sort();
    out
}

/// Removes the path's edges from `T` and re-links the pieces.
pub fn path_step(
    instance: &Instance,
    reference: &ReferenceSolution,
    path: &[usize],
) -> Result<(ReferenceSolution, Step)> {
    if path.len() < 3 {
        return Err(Error::contract(format!(
            "a path step needs k > 1 edges, got {}",
            path.len().saturating_sub(1)
        )));
    }
    let tree = reference.tree_edges(instance);
    let adj = adjacency(&tree);
    let degree = |v: usize| adj.get(&v).map_or(0, Vec::len);
    let distinct: BTreeSet<usize> = path.iter().copied().collect();
    if distinct.len() != path.len() {
        return Err(Error::contract("path repeats a node"));
    }
    let mut edges = Vec::with_capacity(path.len() - 1);
    for w in path.windows(2) {
        let e = Connection::new(w[0], w[1])?;
        if !tree.contains(&e) {
            return Err(Error::contract(format!("{e} is not an edge of T")));
        }
        edges.push(e);
    }
    for &x in &path[1..path.len() - 1] {
        if instance.is_terminal(x) || degree(x) != 2 {
            return Err(Error::contract(format!(
                "interior node {x} must be a non-terminal of degree 2"
            )));
        }
    }
    for &x in [path[0], path[path.len() - 1]].iter() {
        if !(instance.is_terminal(x) || degree(x) > 2) {
            return Err(Error::contract(format!(
                "path end {x} must be a terminal or have degree above 2"
            )));
        }
    }
    apply_removal(instance, reference, StepKind::Path, &edges)
}

/// Edges of `T` between two non-terminals; in `S4` mode only those whose
/// removal leaves at least three `T`-edges on each side.
pub fn bridge_candidates(
    instance: &Instance,
    reference: &ReferenceSolution,
    mode: NormalMode,
) -> Vec<Connection> {
    let tree = reference.tree_edges(instance);
    tree.iter()
        .copied()
        .filter(|e| {
            let (u, v) = e.endpoints();
            if instance.is_terminal(u) || instance.is_terminal(v) {
                return false;
            }
            match mode {
                NormalMode::S3 => true,
                NormalMode::S4 => {
                    let (a, b) = side_edge_counts(&tree, *e);
                    a >= 3 && b >= 3
                }
            }
        })
        .collect()
}

/// Number of `T`-edges reachable from each endpoint once `cut` is removed.
fn side_edge_counts(tree: &BTreeSet<Connection>, cut: Connection) -> (usize, usize) {
    let rest: BTreeSet<Connection> = tree.iter().copied().filter(|&e| e != cut).collect();
    let adj = adjacency(&rest);
    let count_from = |start: usize| {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        let mut edges = BTreeSet::new();
        while let Some(x) = stack.pop() {
            for &y in adj.get(&x).into_iter().flatten() {
                edges.insert(Connection::pair(x, y));
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        edges.len()
    };
    let (u, v) = cut.endpoints();
    (count_from(u), count_from(v))
}

pub fn bridge_step(
    instance: &Instance,
    reference: &ReferenceSolution,
    edge: Connection,
    mode: NormalMode,
) -> Result<(ReferenceSolution, Step)> {
    if !prune_candidates(instance, reference).is_empty()
        || !path_candidates(instance, reference).is_empty()
    {
        return Err(Error::contract(
            "bridge step requires that no path step applies",
        ));
    }
    if !bridge_candidates(instance, reference, mode).contains(&edge) {
        return Err(Error::contract(format!(
            "{edge} is not a bridge between non-terminals in mode {mode}"
        )));
    }
    apply_removal(instance, reference, StepKind::Bridge, &[edge])
}

/// Edges of `T` hanging off a non-terminal of `T`-degree 1.
pub fn prune_candidates(instance: &Instance, reference: &ReferenceSolution) -> Vec<Connection> {
    let tree = reference.tree_edges(instance);
    let adj = adjacency(&tree);
    let mut out: Vec<Connection> = adj
        .iter()
        .filter(|(&v, n)| !instance.is_terminal(v) && n.len() == 1)
        .map(|(&v, n)| Connection::pair(v, n[0]))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub reference: ReferenceSolution,
    pub trace: Vec<Step>,
}

impl Normalization {
    pub fn total_delta(&self) -> i64 {
        self.trace.iter().map(|s| s.cost_delta).sum()
    }
}

/// Applies prune, Path and Bridge steps (in that priority, lexicographic
/// within a kind) until none applies.
pub fn normalize(
    instance: &Instance,
    reference: &ReferenceSolution,
    mode: NormalMode,
) -> Result<Normalization> {
    let mut trace = Vec::new();
    let tree = reference.tree_edges(instance);
    let start = canonical(instance, &tree);
    let mut current = if start != reference.connections {
        let (next, step) = make_step(instance, StepKind::Relink, reference, start);
        trace.push(step);
        next
    } else {
        reference.clone()
    };

    'outer: loop {
        for e in prune_candidates(instance, &current) {
            if let Ok((next, step)) = apply_removal(instance, &current, StepKind::Prune, &[e]) {
                current = next;
                trace.push(step);
                continue 'outer;
            }
        }
        for path in path_candidates(instance, &current) {
            if let Ok((next, step)) = path_step(instance, &current, &path) {
                current = next;
                trace.push(step);
                continue 'outer;
            }
        }
        for e in bridge_candidates(instance, &current, mode) {
            if let Ok((next, step)) = apply_removal(instance, &current, StepKind::Bridge, &[e]) {
                current = next;
                trace.push(step);
                continue 'outer;
            }
        }
        break;
    }
    Ok(Normalization {
        reference: current,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conns(pairs: &[(usize, usize)]) -> BTreeSet<Connection> {
        pairs
            .iter()
            .map(|&(a, b)| Connection::new(a, b).unwrap())
            .collect()
    }

    fn reference(inst: &Instance, pairs: &[(usize, usize)]) -> ReferenceSolution {
        ReferenceSolution::new(inst, conns(pairs)).unwrap()
    }

    #[test]
    fn decompose_single_structures() {
        let inst = Instance::new(2, [(0, 1)], [0, 1]).unwrap();
        let d = decompose(&inst, &reference(&inst, &[(0, 1)]));
        assert_eq!(d.s_comps.len(), 1);
        assert_eq!(d.s_comps[0].classification, Classification::TerminalEdge);

        let inst = Instance::new(4, [(0, 1), (0, 2), (0, 3)], [1, 2, 3]).unwrap();
        let d = decompose(&inst, &reference(&inst, &[(0, 1), (0, 2), (0, 3)]));
        assert_eq!(d.s_comps[0].classification, Classification::Star { s: 3 });
    }

    #[test]
    fn stars_sharing_a_terminal() {
        // centers 0 and 4 share terminal 3
        let edges = [(0, 1), (0, 2), (0, 3), (4, 3), (4, 5), (4, 6)];
        let inst = Instance::new(7, edges, [1, 2, 3, 5, 6]).unwrap();
        let d = decompose(&inst, &reference(&inst, &edges));
        assert_eq!(d.s_comps.len(), 2);
        assert_eq!(d.c_comps.len(), 1);
        assert!(d
            .s_comps
            .iter()
            .all(|s| s.classification == Classification::Star { s: 3 }));
        let total: usize = d.s_comps.iter().map(|s| s.edges.len()).sum();
        assert_eq!(total, edges.len());
    }

    #[test]
    fn comet_classification() {
        // center 0 -> 1, 2, 3 and fork 4 -> 5, 6
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6)];
        let inst = Instance::new(7, edges, [1, 2, 3, 5, 6]).unwrap();
        let c: Vec<Connection> = conns(&edges).into_iter().collect();
        assert_eq!(classify(&inst, &c), Classification::Comet { a: 1, b: 3 });
    }

    #[test]
    fn path_step_examples() {
        // terminal 0 - 1 - 2 - terminal 3
        let inst = Instance::new(4, [(0, 1), (1, 2), (2, 3)], [0, 3]).unwrap();
        let r = reference(&inst, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path_candidates(&inst, &r), vec![vec![0, 1, 2, 3]]);
        let (next, step) = path_step(&inst, &r, &[0, 1, 2, 3]).unwrap();
        assert_eq!(step.cost_delta, -1);
        assert_eq!(next.connections(), &conns(&[(0, 3)]));

        let inst = Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap();
        let r = reference(&inst, &[(0, 1), (1, 2)]);
        let (_, step) = path_step(&inst, &r, &[0, 1, 2]).unwrap();
        assert_eq!(step.cost_delta, 0);
        assert!(path_step(&inst, &r, &[0, 1]).is_err());
    }

    #[test]
    fn bridge_step_examples() {
        // 3-stars at 0 {1,2,3} and 4 {5,6,7} joined by bridge 0-4
        let edges = [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7), (0, 4)];
        let inst = Instance::new(8, edges, [1, 2, 3, 5, 6, 7]).unwrap();
        let r = reference(&inst, &edges);
        assert_eq!(decompose(&inst, &r).s_comps.len(), 1);
        let bridge = Connection::new(0, 4).unwrap();
        let (next, step) = bridge_step(&inst, &r, bridge, NormalMode::S3).unwrap();
        assert_eq!(step.cost_delta, 1);
        let d = decompose(&inst, &next);
        assert_eq!(d.s_comps.len(), 2);
        assert!(d.is_normal(NormalMode::S3));
        // incident to a terminal
        assert!(bridge_step(&inst, &r, Connection::new(0, 1).unwrap(), NormalMode::S3).is_err());
        // no non-terminal pair in T
        let star = reference(&inst, &[(0, 1), (0, 2), (0, 3), (1, 5), (1, 6), (1, 7)]);
        assert!(bridge_candidates(&inst, &star, NormalMode::S3).is_empty());
    }

    #[test]
    fn normalize_long_path() {
        // terminal 0 - 1 - 2 - 3 - 4 - terminal 5
        let edges: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
        let inst = Instance::new(6, edges.clone(), [0, 5]).unwrap();
        let n = normalize(&inst, &reference(&inst, &edges), NormalMode::S3).unwrap();
        assert!(n.reference.tree_edges(&inst).is_empty());
        assert_eq!(n.total_delta(), -3);
    }

    #[test]
    fn normalize_fixed_point_and_pendant() {
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4)];
        let inst = Instance::new(
            7,
            [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (5, 6)],
            [1, 2, 3, 4],
        )
        .unwrap();
        let r = reference(&inst, &edges);
        let n = normalize(&inst, &r, NormalMode::S3).unwrap();
        assert!(n.trace.is_empty());
        assert_eq!(n.reference, r);

        let with_tail = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (5, 6)];
        let n = normalize(&inst, &reference(&inst, &with_tail), NormalMode::S3).unwrap();
        assert_eq!(n.reference, r);
        assert_eq!(n.total_delta(), -2);
        let d = decompose(&inst, &n.reference);
        assert_eq!(d.s_comps[0].classification, Classification::Star { s: 4 });
    }

    #[test]
    fn s4_keeps_comets_s3_breaks_them() {
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6)];
        let inst = Instance::new(7, edges, [1, 2, 3, 5, 6]).unwrap();
        let r = reference(&inst, &edges);
        let s4 = normalize(&inst, &r, NormalMode::S4).unwrap();
        assert!(s4.trace.is_empty());
        assert!(decompose(&inst, &s4.reference).is_normal(NormalMode::S4));
        let s3 = normalize(&inst, &r, NormalMode::S3).unwrap();
        let d = decompose(&inst, &s3.reference);
        assert!(d.is_normal(NormalMode::S3));
        assert_eq!(d.histogram().get("star(3)"), Some(&1));
        assert_eq!(s3.total_delta(), 1);
    }
}
