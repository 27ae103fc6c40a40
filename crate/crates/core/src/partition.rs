//! Partial solutions as partitions of the node set, and the "collapse" step
//! that merges a connected set of parts by adding a spanning tree of
//! representative connections.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::{Connection, Instance, Solution};
use crate::union_find::UnionFind;

/// Partition of the nodes into the components of the accumulated connections.
///
/// Components are named by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionState {
    label: Vec<usize>,
    roots: BTreeSet<usize>,
    terminal: Vec<bool>,
    connections: BTreeSet<Connection>,
    cost: u64,
}

impl PartitionState {
    /// The identity partition with no connections.
    pub fn new(instance: &Instance) -> Self {
        let n = instance.node_count();
        PartitionState {
            label: (0..n).collect(),
            roots: (0..n).collect(),
            terminal: (0..n).map(|v| instance.is_terminal(v)).collect(),
            connections: BTreeSet::new(),
            cost: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.label.len()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.label[v]
    }

    pub fn is_component(&self, c: usize) -> bool {
        self.roots.contains(&c)
    }

    pub fn components(&self) -> impl Iterator<Item = usize> + '_ {
        self.roots.iter().copied()
    }

    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    /// Whether component `c` contains a terminal. `c` must be a component id.
    pub fn is_terminal_component(&self, c: usize) -> bool {
        self.terminal[c]
    }

    pub fn terminal_components(&self) -> Vec<usize> {
        self.roots
            .iter()
            .copied()
            .filter(|&c| self.terminal[c])
            .collect()
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.label.len())
            .filter(|&v| self.label[v] == c)
            .collect()
    }

    pub fn connections(&self) -> &BTreeSet<Connection> {
        &self.connections
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn to_solution(&self) -> Solution {
        Solution {
            connections: self.connections.clone(),
            cost: self.cost,
        }
    }

    /// Merges `components` into one by adding `tree_edges`, which must form a
    /// spanning tree over the selected components.
    pub fn collapse(
        &mut self,
        instance: &Instance,
        components: &[usize],
        tree_edges: &[Connection],
    ) -> Result<()> {
        let selected: BTreeSet<usize> = components.iter().copied().collect();
        if selected.is_empty() {
            return Err(Error::contract("collapse needs at least one component"));
        }
        if selected.len() != components.len() {
            return Err(Error::contract("collapse lists a component twice"));
        }
        for &c in &selected {
            if c >= self.label.len() || !self.roots.contains(&c) {
                return Err(Error::contract(format!("{c} is not a component id")));
            }
        }
        if tree_edges.len() + 1 != selected.len() {
            return Err(Error::contract(format!(
                "{} connections cannot span {} components",
                tree_edges.len(),
                selected.len()
            )));
        }
        let index: BTreeMap<usize, usize> =
            selected.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut uf = UnionFind::new(selected.len());
        for e in tree_edges {
            let (u, v) = e.endpoints();
            if v >= self.label.len() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: self.label.len(),
                });
            }
            let (cu, cv) = (self.label[u], self.label[v]);
            let (Some(&iu), Some(&iv)) = (index.get(&cu), index.get(&cv)) else {
                return Err(Error::contract(format!(
                    "connection {e} leaves the selected components"
                )));
            };
            if !uf.union(iu, iv) {
                return Err(Error::contract(format!("connection {e} closes a cycle")));
            }
        }

        let root = *selected.first().expect("non-empty");
        let mut terminal = false;
        for &c in &selected {
            terminal |= self.terminal[c];
            if c != root {
                self.roots.remove(&c);
            }
        }
        self.terminal[root] = terminal;
        for l in self.label.iter_mut() {
            if selected.contains(l) {
                *l = root;
            }
        }
        for e in tree_edges {
            let (u, v) = e.endpoints();
            self.cost += instance.distance(u, v);
            self.connections.insert(*e);
        }
        Ok(())
    }
}

/// The graph induced on components: `(A, B)` is an edge when some instance
/// edge joins `A` and `B`; the lexicographically smallest such pair is kept
/// as representative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentGraph {
    components: Vec<usize>,
    adjacency: BTreeMap<usize, BTreeMap<usize, Connection>>,
}

impl ComponentGraph {
    pub fn components(&self) -> &[usize] {
        &self.components
    }

    /// Neighbouring components of `c` with their representatives, ascending.
    pub fn neighbors(&self, c: usize) -> impl Iterator<Item = (usize, Connection)> + '_ {
        self.adjacency
            .get(&c)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&d, &e)| (d, e)))
    }

    pub fn representative(&self, a: usize, b: usize) -> Option<Connection> {
        self.adjacency.get(&a).and_then(|m| m.get(&b)).copied()
    }

    /// Component edges `(a, b, representative)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Connection)> + '_ {
        self.adjacency.iter().flat_map(|(&a, m)| {
            m.iter()
                .filter(move |(&b, _)| b > a)
                .map(move |(&b, &e)| (a, b, e))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }
}

pub fn induced_graph(instance: &Instance, state: &PartitionState) -> ComponentGraph {
    let mut adjacency: BTreeMap<usize, BTreeMap<usize, Connection>> = BTreeMap::new();
    for (u, v) in instance.edges() {
        let (a, b) = (state.component_of(u), state.component_of(v));
        if a == b {
            continue;
        }
        let e = Connection::pair(u, v);
        adjacency.entry(a).or_default().entry(b).or_insert(e);
        adjacency.entry(b).or_default().entry(a).or_insert(e);
    }
    ComponentGraph {
        components: state.components().collect(),
        adjacency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::cost;

    fn c(a: usize, b: usize) -> Connection {
        Connection::new(a, b).unwrap()
    }

    #[test]
    fn identity_partition_induces_instance_graph() {
        let inst = Instance::new(5, [(0, 1), (1, 2), (3, 4), (0, 4)], [0, 2]).unwrap();
        let state = PartitionState::new(&inst);
        let g = induced_graph(&inst, &state);
        let edges: Vec<_> = g.edges().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(edges, inst.edges().collect::<Vec<_>>());
    }

    #[test]
    fn merged_p3_has_one_edge_with_representative() {
        let inst = Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap();
        let mut state = PartitionState::new(&inst);
        state.collapse(&inst, &[0, 1], &[c(0, 1)]).unwrap();
        let g = induced_graph(&inst, &state);
        assert_eq!(g.components(), &[0, 2]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2, c(1, 2))]);
        assert!(state.is_terminal_component(0));
        assert_eq!(state.cost(), 1);
    }

    #[test]
    fn single_component_has_no_edges() {
        let inst = Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap();
        let mut state = PartitionState::new(&inst);
        state
            .collapse(&inst, &[0, 1, 2], &[c(0, 1), c(1, 2)])
            .unwrap();
        assert_eq!(induced_graph(&inst, &state).edge_count(), 0);
        assert_eq!(state.component_count(), 1);
    }

    #[test]
    fn representative_is_smallest_pair() {
        // components {0,1} and {2,3}; edges (1,2), (0,3), (1,3)
        let inst = Instance::new(4, [(0, 1), (2, 3), (1, 2), (0, 3), (1, 3)], [0]).unwrap();
        let mut state = PartitionState::new(&inst);
        state.collapse(&inst, &[0, 1], &[c(0, 1)]).unwrap();
        state.collapse(&inst, &[2, 3], &[c(2, 3)]).unwrap();
        let g = induced_graph(&inst, &state);
        assert_eq!(g.representative(0, 2), Some(c(0, 3)));
        assert_eq!(g.representative(2, 0), Some(c(0, 3)));
    }

    #[test]
    fn collapse_three_star_costs_three() {
        let inst = Instance::new(4, [(0, 1), (0, 2), (0, 3)], [1, 2, 3]).unwrap();
        let mut state = PartitionState::new(&inst);
        state
            .collapse(&inst, &[0, 1, 2, 3], &[c(0, 1), c(0, 2), c(0, 3)])
            .unwrap();
        assert_eq!(state.cost(), 3);
        assert_eq!(state.component_count(), 1);
        assert_eq!(state.members(0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn collapse_via_non_edge_costs_two() {
        let inst = Instance::new(2, [], [0, 1]).unwrap();
        let mut state = PartitionState::new(&inst);
        state.collapse(&inst, &[0, 1], &[c(0, 1)]).unwrap();
        assert_eq!(state.cost(), 2);
        assert_eq!(cost(&inst, state.connections()).unwrap(), 2);
    }

    #[test]
    fn collapse_rejects_non_trees() {
        let inst = Instance::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)], [0]).unwrap();
        let mut state = PartitionState::new(&inst);
        let before = state.clone();
        // cycle
        assert!(state
            .collapse(&inst, &[0, 1, 2], &[c(0, 1), c(1, 2), c(0, 2)])
            .is_err());
        assert!(state
            .collapse(&inst, &[0, 1, 2], &[c(0, 1), c(0, 1)])
            .is_err());
        // not spanning: edge leaves the selection
        assert!(state
            .collapse(&inst, &[0, 1, 2], &[c(0, 1), c(2, 3)])
            .is_err());
        // non-root component id
        state.collapse(&inst, &[0, 1], &[c(0, 1)]).unwrap();
        assert!(state.collapse(&inst, &[1, 2], &[c(1, 2)]).is_err());
        assert_ne!(state, before);
    }
}
