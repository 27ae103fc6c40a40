//! Maximum-cardinality matching in general graphs (Edmonds' blossom method)
//! and the fork-exclusive variant used by the comet search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::instance::Connection;

const NONE: usize = usize::MAX;

/// Maximum-cardinality matching of the simple graph on `0..n` given by `edges`.
///
/// Returns `mate`, with `mate[v] == Some(w)` iff `{v, w}` is matched.
/// Parallel edges and self-loops in `edges` are ignored.
pub fn maximum_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    Blossom::new(adj).run()
}

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        let n = self.adj.len();
        // greedy warm start
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.adj[v].iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            let mut v = self.find_augmenting_path(root);
            while v != NONE {
                let pv = self.parent[v];
                let next = self.mate[pv];
                self.mate[v] = pv;
                self.mate[pv] = v;
                v = next;
            }
        }
        self.mate
            .into_iter()
            .map(|m| if m == NONE { None } else { Some(m) })
            .collect()
    }

    fn lowest_common_base(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS over alternating paths from the exposed vertex `root`; returns the
    /// exposed endpoint of an augmenting path or `NONE`.
    fn find_augmenting_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // odd cycle: contract the blossom
                    let cur = self.lowest_common_base(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for u in 0..n {
                        if self.in_blossom[self.base[u]] {
                            self.base[u] = cur;
                            if !self.used[u] {
                                self.used[u] = true;
                                self.queue.push_back(u);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        NONE
    }
}

/// Pair of terminal components joined through one fork node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxEdge {
    pub a: usize,
    pub b: usize,
    pub fork: usize,
}

/// Terminal components reachable through fork nodes of one comet center.
///
/// A fork node adjacent to terminal components `a` and `b` realizes the
/// aux edge `{a, b}`; a fork node reaching `k` components realizes all
/// `k choose 2` pairs, and the same pair may be realized by several forks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuxGraph {
    vertices: BTreeSet<usize>,
    forks: BTreeMap<usize, BTreeSet<usize>>,
}

impl AuxGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices.insert(v);
    }

    /// Registers `fork` as adjacent to each of `terminals`.
    pub fn add_fork(&mut self, fork: usize, terminals: impl IntoIterator<Item = usize>) {
        let reach = self.forks.entry(fork).or_default();
        for t in terminals {
            reach.insert(t);
            self.vertices.insert(t);
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied()
    }

    pub fn fork_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.forks.keys().copied()
    }

    /// Terminal components `fork` is adjacent to.
    pub fn reach(&self, fork: usize) -> impl Iterator<Item = usize> + '_ {
        self.forks.get(&fork).into_iter().flatten().copied()
    }

    /// Every realized pair, ordered by `(a, b, fork)`.
    pub fn edges(&self) -> Vec<AuxEdge> {
        let mut out = Vec::new();
        for (&fork, reach) in &self.forks {
            let r: Vec<usize> = reach.iter().copied().collect();
            for (i, &a) in r.iter().enumerate() {
                for &b in &r[i + 1..] {
                    out.push(AuxEdge { a, b, fork });
                }
            }
        }
        out.sort();
        out
    }

    fn vertex_index(&self) -> BTreeMap<usize, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect()
    }
}

/// Set of vertex-disjoint aux edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<AuxEdge>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// No two edges share an endpoint.
    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| seen.insert(e.a) && seen.insert(e.b))
    }

    /// Vertex-disjoint and no fork node used twice.
    pub fn is_fork_disjoint(&self) -> bool {
        let mut forks = BTreeSet::new();
        self.is_vertex_disjoint() && self.edges.iter().all(|e| forks.insert(e.fork))
    }
}

/// Maximum matching over the vertex pairs of `graph`, ignoring fork identity.
///
/// Each matched pair reports the smallest fork node that realizes it.
pub fn max_matching(graph: &AuxGraph) -> Matching {
    let index = graph.vertex_index();
    let ids: Vec<usize> = graph.vertices.iter().copied().collect();
    let mut by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in graph.edges() {
        by_pair.entry((e.a, e.b)).or_insert(e.fork);
    }
    let pairs: Vec<(usize, usize)> = by_pair
        .keys()
        .map(|&(a, b)| (index[&a], index[&b]))
        .collect();
    let mate = maximum_matching(ids.len(), &pairs);
    let mut edges = Vec::new();
    for (i, m) in mate.iter().enumerate() {
        if let Some(j) = *m {
            if i < j {
                let (a, b) = (ids[i], ids[j]);
                edges.push(AuxEdge {
                    a,
                    b,
                    fork: by_pair[&(a, b)],
                });
            }
        }
    }
    Matching { edges }
}

/// Maximum set of aux edges that is vertex-disjoint and uses every fork node
/// at most once.
///
/// Reduction: each fork node `f` becomes two vertices `f'`, `f''` joined by an
/// edge, both adjacent to every terminal vertex `f` can reach. A maximum
/// matching covers every gadget once or twice, and exactly the gadgets whose
/// two vertices are matched to terminals are forks in use, so the result has
/// `|M| - |F|` edges, which is optimal.
pub fn max_fork_matching(graph: &AuxGraph) -> Matching {
    let index = graph.vertex_index();
    let ids: Vec<usize> = graph.vertices.iter().copied().collect();
    let forks: Vec<usize> = graph.fork_nodes().collect();
    let reach: Vec<Vec<usize>> = forks
        .iter()
        .map(|&f| graph.reach(f).map(|t| index[&t]).collect())
        .collect();
    let base = ids.len();
    let mut gadget_edges = Vec::new();
    for (i, targets) in reach.iter().enumerate() {
        let (x, y) = (base + 2 * i, base + 2 * i + 1);
        gadget_edges.push((x, y));
        for &t in targets {
            gadget_edges.push((t, x));
            gadget_edges.push((t, y));
        }
    }
    let mate = maximum_matching(base + 2 * forks.len(), &gadget_edges);
    let mut edges = Vec::new();
    for (i, &f) in forks.iter().enumerate() {
        let (x, y) = (base + 2 * i, base + 2 * i + 1);
        if let (Some(p), Some(q)) = (mate[x], mate[y]) {
            if p < base && q < base {
                let (a, b) = (ids[p.min(q)], ids[p.max(q)]);
                edges.push(AuxEdge { a, b, fork: f });
            }
        }
    }
    edges.sort();
    Matching { edges }
}

/// Matched pairs as connections (used by callers that want plain pairs).
pub fn matched_pairs(mate: &[Option<usize>]) -> Vec<Connection> {
    mate.iter()
        .enumerate()
        .filter_map(|(i, m)| m.filter(|&j| i < j).map(|j| Connection::pair(i, j)))
        .collect()
}
