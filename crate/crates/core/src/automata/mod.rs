//! Finite automata over interned alphabets.
//!
//! Automata never store initial states: every query names the state it
//! starts from, the way a P-automaton is entered at a control state.

mod alt;
mod nfa;
mod pattern;

pub use alt::{AltAutomaton, StateSet};
pub(crate) use alt::minimal_sets;
pub use nfa::{product_intersect, Label, Nfa, Product};
pub use pattern::pattern_forbidden_factors;

use crate::symbols::Symbol;

/// A finite sequence of symbols. For stacks the top is at index 0.
pub type Word = Vec<Symbol>;
