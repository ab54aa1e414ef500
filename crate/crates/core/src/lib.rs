//! Strong orientation and distributed routing for (n,k)-star
//! interconnection graphs, with brute-force verification at desk scale.
//!
//! The graph on all k-permutations of `1..=n` carries two edge families:
//! star edges exchange the head with an arm position, clique edges replace
//! the head with an unused symbol. Orienting star edges by node sign and
//! clique edges by head comparison yields a strongly connected digraph that
//! a memoryless next-hop router traverses within
//! `floor((n+k)/2) + 2k + 6 - delta(n,k)` moves. The oracle module checks
//! all of this exhaustively on small instances.

pub mod bounds;
pub mod error;
pub mod oracle;
pub mod orientation;
pub mod permutation;
pub mod router;
pub mod star_graph;

pub use bounds::{oriented_diameter_bound, prior_bounds, regime_cap};
pub use error::{Error, Result};
pub use oracle::{
    audit_trace, bounds_table, verify_all_pairs, verify_pair, verify_sampled, BoundReport,
    OrientedGraph, SplitMix64, TraceAudit, UndirectedGraph, VerifySummary,
    DEFAULT_MEMORY_BUDGET,
};
pub use orientation::{
    audit_clique, orient_clique_edge, orient_star_edge, oriented_clique, out_neighbors, Arc,
    CliqueAudit, EdgeType, OrientedClique,
};
pub use permutation::{
    alternating_cycle_count, alternating_cycles, CycleDecomposition, Direction, Parity,
    Permutation,
};
pub use router::{
    clique_move, move_context, route, route_step, seed_clique, seed_star, star_move, MoveContext,
    MoveKind, Phase, RouteStep, RouteTrace, ValueSet,
};
pub use star_graph::{undirected_diameter_formula, GraphParams, NodeId, NodeLabel};
