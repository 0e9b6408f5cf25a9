//! Pushdown games and their winning regions as alternating automata.

mod game;
mod region;
mod solve;

pub use game::{Player, PushdownGame, ReachTarget, WinningCondition};
pub use region::{pre_step, project, region_member, subsume, RegionAutomaton};
pub use solve::{
    solve_buchi_game, solve_buchi_game_with, solve_parity_game, solve_parity_game_with,
    solve_reachability_game, NoObserver, Observer, MAX_ITERATIONS,
};
