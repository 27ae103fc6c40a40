//! Approximation algorithms for the Steiner tree problem in metrics with
//! distances 1 and 2 (STP[1,2]), with exact oracles and a ratio harness.
//!
//! An instance is a graph whose edges are the distance-1 pairs; every other
//! pair of distinct nodes is at distance 2. A solution is a set of node pairs
//! that connects all terminals, costing 1 per edge and 2 per non-edge.

pub mod audit;
pub mod error;
pub mod exact;
pub mod harness;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod matching;
pub mod partition;
pub mod sixphase;
pub mod union_find;

pub use error::{Error, Result};
pub use heuristics::FinishingMode;
pub use instance::{cost, is_valid_solution, Connection, Instance, Solution};
pub use partition::{induced_graph, ComponentGraph, PartitionState};

/// Exact rational used for cost indices and approximation ratios.
pub type Rational = num_rational::Ratio<i64>;
