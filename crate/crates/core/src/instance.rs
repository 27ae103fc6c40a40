use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Fixed-width bitset row, one per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(bits: usize) -> Self {
        BitRow(vec![0; bits.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// An STP[1,2] instance: the graph of distance-1 pairs plus the terminal set.
///
/// Every pair of distinct nodes that is not an edge is at distance 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    node_count: usize,
    adjacency: Vec<BitRow>,
    terminals: Vec<usize>,
    terminal_mask: Vec<bool>,
}

impl Instance {
    /// Builds an instance; duplicate edges are merged and terminals are deduplicated.
    pub fn new<E, T>(node_count: usize, edges: E, terminals: T) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize)>,
        T: IntoIterator<Item = usize>,
    {
        if node_count == 0 {
            return Err(Error::invalid("instance needs at least one node"));
        }
        let mut adjacency = vec![BitRow::new(node_count); node_count];
        for (u, v) in edges {
            check_node(u, node_count)?;
            check_node(v, node_count)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].set(v);
            adjacency[v].set(u);
        }
        let mut terminal_mask = vec![false; node_count];
        for t in terminals {
            check_node(t, node_count)?;
            terminal_mask[t] = true;
        }
        let terminals = (0..node_count).filter(|&v| terminal_mask[v]).collect();
        Ok(Instance {
            node_count,
            adjacency,
            terminals,
            terminal_mask,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Terminals in ascending order.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminal_mask[v]
    }

    pub fn non_terminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count).filter(move |&v| !self.terminal_mask[v])
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adjacency[u].get(v)
    }

    /// Metric distance: 0 on the diagonal, 1 for edges, 2 otherwise.
    pub fn distance(&self, u: usize, v: usize) -> u64 {
        if u == v {
            0
        } else if self.adjacency[u].get(v) {
            1
        } else {
            2
        }
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].iter()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].count()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count).flat_map(move |u| {
            self.adjacency[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitRow::count).sum::<usize>() / 2
    }

    /// Copy with node `v` deleted; higher ids shift down by one.
    pub fn without_node(&self, v: usize) -> Result<Instance> {
        check_node(v, self.node_count)?;
        if self.node_count == 1 {
            return Err(Error::invalid("cannot delete the only node"));
        }
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let edges = self
            .edges()
            .filter(|&(a, b)| a != v && b != v)
            .map(|(a, b)| (shift(a), shift(b)))
            .collect::<Vec<_>>();
        let terminals = self
            .terminals
            .iter()
            .filter(|&&t| t != v)
            .map(|&t| shift(t))
            .collect::<Vec<_>>();
        Instance::new(self.node_count - 1, edges, terminals)
    }

    /// Copy with node `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Instance> {
        if perm.len() != self.node_count {
            return Err(Error::invalid("permutation length differs from node count"));
        }
        let mut seen = vec![false; self.node_count];
        for &p in perm {
            check_node(p, self.node_count)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        Instance::new(
            self.node_count,
            self.edges().map(|(u, v)| (perm[u], perm[v])),
            self.terminals.iter().map(|&t| perm[t]),
        )
    }
}

fn check_node(v: usize, node_count: usize) -> Result<()> {
    if v >= node_count {
        Err(Error::NodeOutOfRange {
            node: v,
            node_count,
        })
    } else {
        Ok(())
    }
}

/// Unordered pair of distinct nodes, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Connection {
    lo: usize,
    hi: usize,
}

impl Connection {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Connection { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Connection { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub(crate) fn pair(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        Connection {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl TryFrom<(usize, usize)> for Connection {
    type Error = Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        Connection::new(a, b)
    }
}

impl From<Connection> for (usize, usize) {
    fn from(c: Connection) -> Self {
        (c.lo, c.hi)
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// `|T ∩ E| + 2 |T − E|` for the connection set `T`.
pub fn cost<'a, I>(instance: &Instance, connections: I) -> Result<u64>
where
    I: IntoIterator<Item = &'a Connection>,
{
    connections.into_iter().try_fold(0u64, |acc, c| {
        check_node(c.hi, instance.node_count)?;
        Ok(acc + instance.distance(c.lo, c.hi))
    })
}

/// True when all terminals lie in one connected component of `(V, connections)`.
///
/// Connections with out-of-range endpoints make the set invalid.
pub fn is_valid_solution<'a, I>(instance: &Instance, connections: I) -> bool
where
    I: IntoIterator<Item = &'a Connection>,
{
    let mut uf = UnionFind::new(instance.node_count);
    for c in connections {
        if c.hi >= instance.node_count {
            return false;
        }
        uf.union(c.lo, c.hi);
    }
    match instance.terminals.split_first() {
        None => true,
        Some((&first, rest)) => rest.iter().all(|&t| uf.same(first, t)),
    }
}

/// A set of connections together with its cost under the instance metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub connections: BTreeSet<Connection>,
    pub cost: u64,
}

impl Solution {
    pub fn new(instance: &Instance, connections: BTreeSet<Connection>) -> Result<Self> {
        let cost = cost(instance, &connections)?;
        Ok(Solution { connections, cost })
    }

    pub fn is_valid(&self, instance: &Instance) -> bool {
        is_valid_solution(instance, &self.connections)
    }

    /// Number of connections that are edges of the instance graph.
    pub fn edge_connections(&self, instance: &Instance) -> usize {
        self.connections
            .iter()
            .filter(|c| instance.is_edge(c.lo, c.hi))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Instance {
        Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap()
    }

    fn conns(pairs: &[(usize, usize)]) -> Vec<Connection> {
        pairs
            .iter()
            .map(|&(a, b)| Connection::new(a, b).unwrap())
            .collect()
    }

    #[test]
    fn cost_counts_edges_once_and_non_edges_twice() {
        let inst = p3();
        assert_eq!(cost(&inst, &conns(&[(0, 1), (1, 2)])).unwrap(), 2);
        assert_eq!(cost(&inst, &conns(&[(0, 2)])).unwrap(), 2);
        assert_eq!(cost(&inst, &[]).unwrap(), 0);
    }

    #[test]
    fn cost_rejects_out_of_range_endpoint() {
        let inst = p3();
        let err = cost(&inst, &conns(&[(0, 7)])).unwrap_err();
        assert_eq!(
            err,
            Error::NodeOutOfRange {
                node: 7,
                node_count: 3
            }
        );
    }

    #[test]
    fn validity() {
        let inst = p3();
        assert!(is_valid_solution(&inst, &conns(&[(0, 1), (1, 2)])));
        assert!(!is_valid_solution(&inst, &[]));
        let single = Instance::new(3, [(0, 1)], [1]).unwrap();
        assert!(is_valid_solution(&single, &[]));
        assert!(!is_valid_solution(&inst, &conns(&[(0, 9)])));
    }

    #[test]
    fn instance_rejects_bad_input() {
        assert_eq!(
            Instance::new(3, [(1, 1)], [0]).unwrap_err(),
            Error::SelfLoop(1)
        );
        assert!(Instance::new(3, [(0, 3)], [0]).is_err());
        assert!(Instance::new(3, [(0, 1)], [5]).is_err());
        assert!(Instance::new(0, [], []).is_err());
        assert!(Connection::new(2, 2).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_bitset_iterates_across_words() {
        let inst = Instance::new(130, [(0, 129), (64, 3), (127, 128)], [0]).unwrap();
        assert!(inst.is_edge(129, 0) && inst.is_edge(0, 129));
        assert_eq!(inst.neighbors(0).collect::<Vec<_>>(), vec![129]);
        assert_eq!(
            inst.edges().collect::<Vec<_>>(),
            vec![(0, 129), (3, 64), (127, 128)]
        );
        assert_eq!(inst.edge_count(), 3);
        assert_eq!(inst.distance(5, 5), 0);
        assert_eq!(inst.distance(3, 64), 1);
        assert_eq!(inst.distance(3, 65), 2);
    }

    #[test]
    fn node_deletion_shifts_ids() {
        let inst = Instance::new(4, [(0, 1), (1, 2), (2, 3)], [0, 3]).unwrap();
        let smaller = inst.without_node(1).unwrap();
        assert_eq!(smaller.node_count(), 3);
        assert_eq!(smaller.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(smaller.terminals(), &[0, 2]);
    }

    #[test]
    fn connection_serializes_as_pair() {
        let c = Connection::new(4, 1).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,4]");
        let back: Connection = serde_json::from_str("[4,1]").unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Connection>("[2,2]").is_err());
    }
}
