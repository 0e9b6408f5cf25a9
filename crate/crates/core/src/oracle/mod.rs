//! Brute-force ground truth on stack-bounded configuration graphs.
//!
//! Nothing here is meant to be fast. Every function enumerates explicit
//! configurations and is capped by [`Limits`].

mod graph;
mod solve;

pub use graph::{
    bfs_poststar_member, bfs_prestar_member, bounded_graph, bounded_graph_with, BoundedGraph, Limits,
};
pub use solve::{bracket_region, bracket_region_with, finite_game_region, Bracket};
