//! The derivation relation of a bottom-free pushdown system as a finite
//! union of prefix-rewrite pairs.
//!
//! Rules become words of push and pop actions, pairs `A₊A₋` are erased by
//! ε-saturation, sequences that cannot act on any stack are filtered out,
//! and what remains (a subset of `Γ₋*Γ₊*`) is split at the pop/push
//! boundary.

mod actions;
mod pipeline;
mod relation;

pub use actions::{apply_actions, reduce_sequence, Action, ActionAlphabet};
pub use pipeline::{behaviour_automaton, benois_reduce, decompose, productive_filter, Language};
pub use relation::{deriv_member, deriv_relation, PrefixRewriteRelation};
