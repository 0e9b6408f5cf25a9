//! Saturation algorithms for pushdown systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`automata`]: interned handles, nondeterministic and alternating finite
//!   automata over stack alphabets.
//! * [`pds`]: pushdown systems, configurations and one-step semantics.
//! * [`reachability`]: `pre*` by saturation, `post*` by inversion, the pop
//!   relation and the `Rew` closure that yields a second, independent
//!   construction of `pre*` for bottom targets.
//! * [`derivation`]: the action-sequence pipeline that turns a pushdown system
//!   into a finite union of prefix-rewrite pairs describing its derivation
//!   relation.
//! * [`games`]: winning regions of pushdown reachability, Büchi and parity
//!   games as alternating automata.
//! * [`oracle`]: bounded explicit-state ground truth used to cross-check all
//!   of the above.
//! * [`sample`]: seeded random instance generators and word enumeration.

pub mod automata;
pub mod derivation;
pub mod error;
pub mod games;
pub mod oracle;
pub mod pds;
pub mod reachability;
pub mod sample;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::{Control, State, Symbol, SymbolTable};
