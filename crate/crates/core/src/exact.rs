//! Exact optima for desk-scale instances. Two independent routes: enumeration
//! of Steiner-node subsets, and the Dreyfus–Wagner subset dynamic program
//! over the 1/2 metric.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{Connection, Instance};
use crate::union_find::UnionFind;

pub const DEFAULT_NODE_CAP: usize = 20;
pub const DEFAULT_TERMINAL_CAP: usize = 12;

/// Bitmask enumeration cannot go past one machine word.
const MAX_MASK_NODES: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub cost: u64,
    pub witness: BTreeSet<Connection>,
}

/// Size limits for the two oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactCaps {
    pub max_nodes: usize,
    pub max_terminals: usize,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps {
            max_nodes: DEFAULT_NODE_CAP,
            max_terminals: DEFAULT_TERMINAL_CAP,
        }
    }
}

/// Optimum via subset enumeration with the default node cap.
pub fn brute_force_opt(instance: &Instance) -> Result<OptResult> {
    brute_force_opt_capped(instance, DEFAULT_NODE_CAP)
}

/// For every set `S` of non-terminals, the minimum spanning tree of the metric
/// on `R ∪ S` costs `|R ∪ S| - 1` plus one extra per additional component of
/// the induced subgraph `G[R ∪ S]`; the optimum is the minimum over `S`.
///
/// Among optimal subsets the witness with the lexicographically smallest
/// sorted connection list is returned.
pub fn brute_force_opt_capped(instance: &Instance, max_nodes: usize) -> Result<OptResult> {
    let n = instance.node_count();
    let limit = max_nodes.min(MAX_MASK_NODES);
    if n > limit {
        return Err(Error::CapExceeded {
            what: "node count",
            limit,
            actual: n,
            hint: " for brute-force optimum",
        });
    }
    if instance.terminals().len() <= 1 {
        return Ok(OptResult {
            cost: 0,
            witness: BTreeSet::new(),
        });
    }
    let adj: Vec<u64> = (0..n)
        .map(|u| instance.neighbors(u).fold(0u64, |m, v| m | 1 << v))
        .collect();
    let terminal_mask = instance.terminals().iter().fold(0u64, |m, &t| m | 1 << t);
    let steiner: Vec<usize> = instance.non_terminals().collect();

    let mut best_cost = u64::MAX;
    let mut best_witness: Vec<Connection> = Vec::new();
    for subset in 0u64..(1u64 << steiner.len()) {
        let mut nodes = terminal_mask;
        for (i, &s) in steiner.iter().enumerate() {
            if subset >> i & 1 == 1 {
                nodes |= 1 << s;
            }
        }
        let size = nodes.count_ones() as u64;
        if size - 1 > best_cost {
            continue;
        }
        let cost = size + component_count(nodes, &adj) - 2;
        if cost > best_cost {
            continue;
        }
        let witness = kruskal_witness(instance, nodes);
        if cost < best_cost || witness < best_witness {
            best_cost = cost;
            best_witness = witness;
        }
    }
    Ok(OptResult {
        cost: best_cost,
        witness: best_witness.into_iter().collect(),
    })
}

fn component_count(nodes: u64, adj: &[u64]) -> u64 {
    let mut remaining = nodes;
    let mut count = 0;
    while remaining != 0 {
        let start = remaining & remaining.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            frontier = next & nodes & !comp;
            comp |= frontier;
        }
        remaining &= !comp;
        count += 1;
    }
    count
}

/// Kruskal over all pairs of `nodes`, ordered by (distance, pair).
fn kruskal_witness(instance: &Instance, nodes: u64) -> Vec<Connection> {
    let list: Vec<usize> = (0..64).filter(|&v| nodes >> v & 1 == 1).collect();
    let mut pairs = Vec::new();
    for (i, &u) in list.iter().enumerate() {
        for &v in &list[i + 1..] {
            pairs.push((instance.distance(u, v), u, v));
        }
    }
    pairs.sort_unstable();
    let mut uf = UnionFind::new(instance.node_count());
    let mut out: Vec<Connection> = pairs
        .into_iter()
        .filter(|&(_, u, v)| uf.union(u, v))
        .map(|(_, u, v)| Connection::pair(u, v))
        .collect();
    out.sort_unstable();
    out
}

/// Optimum via Dreyfus–Wagner with the default terminal cap.
pub fn dreyfus_wagner(instance: &Instance) -> Result<OptResult> {
    dreyfus_wagner_capped(instance, DEFAULT_TERMINAL_CAP)
}

#[derive(Clone, Copy)]
enum Split {
    Leaf,
    Halves(u32),
}

/// Subset DP over terminals: `tree[S][v]` is the cheapest tree spanning the
/// terminal set `S` plus node `v`. Every pair is at distance 1 or 2, so the
/// closure needs no reachability handling and one relaxation per subset.
pub fn dreyfus_wagner_capped(instance: &Instance, max_terminals: usize) -> Result<OptResult> {
    let terminals = instance.terminals();
    let k = terminals.len();
    if k > max_terminals || k > 31 {
        return Err(Error::CapExceeded {
            what: "terminal count",
            limit: max_terminals.min(31),
            actual: k,
            hint: " for Dreyfus-Wagner",
        });
    }
    if k <= 1 {
        return Ok(OptResult {
            cost: 0,
            witness: BTreeSet::new(),
        });
    }
    let n = instance.node_count();
    let root = terminals[k - 1];
    let others = &terminals[..k - 1];
    let full: usize = (1 << others.len()) - 1;
    let at = |s: usize, v: usize| s * n + v;
    let inf = u64::MAX / 4;

    let mut tree = vec![inf; (full + 1) * n];
    let mut joined_at = vec![0u32; (full + 1) * n];
    let mut split = vec![Split::Leaf; (full + 1) * n];
    let mut merged = vec![inf; n];

    for s in 1..=full {
        if s.is_power_of_two() {
            let t = others[s.trailing_zeros() as usize];
            merged.fill(inf);
            merged[t] = 0;
            split[at(s, t)] = Split::Leaf;
        } else {
            let low = s & s.wrapping_neg();
            for (u, m) in merged.iter_mut().enumerate() {
                *m = inf;
                // enumerate proper subsets containing the lowest bit
                let rest = s ^ low;
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    if a != s {
                        let c = tree[at(a, u)] + tree[at(s ^ a, u)];
                        if c < *m {
                            *m = c;
                            split[at(s, u)] = Split::Halves(a as u32);
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
        }
        for v in 0..n {
            let mut best = inf;
            let mut arg = v;
            for (u, &m) in merged.iter().enumerate() {
                if m >= inf {
                    continue;
                }
                let c = m + instance.distance(u, v);
                if c < best {
                    best = c;
                    arg = u;
                }
            }
            tree[at(s, v)] = best;
            joined_at[at(s, v)] = arg as u32;
        }
    }

    let cost = tree[at(full, root)];
    let mut witness = BTreeSet::new();
    let mut stack = vec![(full, root)];
    while let Some((s, v)) = stack.pop() {
        let u = joined_at[at(s, v)] as usize;
        if u != v {
            witness.insert(Connection::pair(u, v));
        }
        if let Split::Halves(a) = split[at(s, u)] {
            if !s.is_power_of_two() {
                let a = a as usize;
                stack.push((a, u));
                stack.push((s ^ a, u));
            }
        }
    }
    Ok(OptResult { cost, witness })
}

/// Picks whichever oracle is cheaper for this instance within `caps`.
pub fn optimum(instance: &Instance, caps: ExactCaps) -> Result<OptResult> {
    let n = instance.node_count();
    let k = instance.terminals().len();
    let bf_ok = n <= caps.max_nodes.min(MAX_MASK_NODES);
    let dw_ok = k <= caps.max_terminals.min(31);
    let bf_cheaper = (n - k) as f64 * 2f64.ln() <= k as f64 * 3f64.ln();
    match (bf_ok, dw_ok) {
        (true, true) if bf_cheaper => brute_force_opt_capped(instance, caps.max_nodes),
        (_, true) => dreyfus_wagner_capped(instance, caps.max_terminals),
        (true, false) => brute_force_opt_capped(instance, caps.max_nodes),
        (false, false) => Err(Error::CapExceeded {
            what: "instance size",
            limit: caps.max_nodes,
            actual: n,
            hint: " for both exact oracles",
        }),
    }
}
