//! Regular sets of configurations and their closure under `pre*` / `post*`.

mod pautomaton;
mod relations;
mod saturation;

pub use pautomaton::PAutomaton;
pub use relations::{buchi_target_automaton, pop_relation, rew_closure, PopRelation, RewRelation};
pub use saturation::{poststar, prestar, prestar_traced, Saturation};
