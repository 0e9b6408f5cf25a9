use crate::error::{invalid, Error, Result};

use super::region::game_targets;
use super::{pre_step, project, PushdownGame, RegionAutomaton, WinningCondition};

/// Iteration cap of every fixpoint loop; exceeding it is a resource error.
pub const MAX_ITERATIONS: usize = 10_000;

/// Hook into the nested fixpoint loops of the Büchi and parity solvers.
pub trait Observer {
    /// Called after the projection that ends one iteration of the fixpoint
    /// at `level`. `iteration` restarts at 1 for every new fixpoint
    /// computation at that level.
    fn projected(&mut self, _level: usize, _iteration: usize, _region: &RegionAutomaton) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

fn too_many(what: &str) -> Error {
    Error::Resource(format!("{what} did not stabilise within {MAX_ITERATIONS} iterations"))
}

/// Least fixpoint saturation of the target automaton: Éloïse positions gain
/// every run target of one of their rules, Abelard positions the minimal
/// unions of one run target per rule.
pub fn solve_reachability_game(game: &PushdownGame) -> Result<RegionAutomaton> {
    let WinningCondition::Reachability(target) = game.condition() else {
        return invalid("not a reachability game");
    };
    let pds = game.pds();
    let mut region = RegionAutomaton::over_target(pds, target.aut(), target.embed())?;
    let entries: Vec<_> = pds.controls().map(|p| region.entry(p)).collect::<Result<_>>()?;
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for p in pds.controls() {
            for a in pds.symbols() {
                let vacuous = if a == pds.bottom() {
                    region.sink_bottom()
                } else {
                    region.sink_star()
                };
                let targets = game_targets(
                    region.aut(),
                    game.owner(p),
                    pds.rules_from(p, a),
                    |r| entries[r.to.index()],
                    vacuous,
                );
                for t in targets {
                    changed |= region.aut_mut().insert_minimal(entries[p.index()], a, t)?;
                }
            }
        }
        if !changed {
            return Ok(region);
        }
    }
    Err(too_many("reachability saturation"))
}

pub fn solve_buchi_game(game: &PushdownGame) -> Result<RegionAutomaton> {
    solve_buchi_game_with(game, &mut NoObserver)
}

/// Greatest fixpoint over `p⁰` (started from every stack) around a least
/// fixpoint over `p¹` (started empty), each step computed into `p²` by
/// [`pre_step`] and moved down by [`project`].
pub fn solve_buchi_game_with(game: &PushdownGame, obs: &mut dyn Observer) -> Result<RegionAutomaton> {
    if !matches!(game.condition(), WinningCondition::Buchi(_)) {
        return invalid("not a Büchi game");
    }
    let pds = game.pds();
    let mut b = RegionAutomaton::initial(pds);
    b.add_level(pds, 0, true)?;
    for it in 1..=MAX_ITERATIONS {
        let before = b.clone();
        b = buchi_inner(game, b, obs)?;
        b = project(&b, 1, 0)?;
        obs.projected(0, it, &b);
        if b == before {
            return Ok(b);
        }
    }
    Err(too_many("outer Büchi fixpoint"))
}

fn buchi_inner(game: &PushdownGame, mut b: RegionAutomaton, obs: &mut dyn Observer) -> Result<RegionAutomaton> {
    b.add_level(game.pds(), 1, false)?;
    for it in 1..=MAX_ITERATIONS {
        let before = b.clone();
        b = pre_step(&b, game, 2)?;
        b = project(&b, 2, 1)?;
        obs.projected(1, it, &b);
        if b == before {
            return Ok(b);
        }
    }
    Err(too_many("inner Büchi fixpoint"))
}

pub fn solve_parity_game(game: &PushdownGame) -> Result<RegionAutomaton> {
    solve_parity_game_with(game, &mut NoObserver)
}

/// Nested fixpoints over levels `0..=κ`, greatest on even levels and least
/// on odd ones, with [`pre_step`] at level `κ + 1`. Büchi games are solved
/// as parity games over colours `{0, 1}`.
pub fn solve_parity_game_with(game: &PushdownGame, obs: &mut dyn Observer) -> Result<RegionAutomaton> {
    if matches!(game.condition(), WinningCondition::Reachability(_)) {
        return invalid("not a parity game");
    }
    let kappa = game.max_colour() as usize;
    dispatch(game, RegionAutomaton::initial(game.pds()), 0, kappa, obs)
}

fn dispatch(
    game: &PushdownGame,
    b: RegionAutomaton,
    alpha: usize,
    kappa: usize,
    obs: &mut dyn Observer,
) -> Result<RegionAutomaton> {
    if alpha == kappa + 1 {
        pre_step(&b, game, alpha)
    } else {
        fix(game, b, alpha, kappa, obs)
    }
}

fn fix(
    game: &PushdownGame,
    mut b: RegionAutomaton,
    alpha: usize,
    kappa: usize,
    obs: &mut dyn Observer,
) -> Result<RegionAutomaton> {
    b.add_level(game.pds(), alpha, alpha.is_multiple_of(2))?;
    for it in 1..=MAX_ITERATIONS {
        let before = b.clone();
        b = dispatch(game, b, alpha + 1, kappa, obs)?;
        b = project(&b, alpha + 1, alpha)?;
        obs.projected(alpha, it, &b);
        if b == before {
            return Ok(b);
        }
    }
    Err(too_many(&format!("fixpoint at level {alpha}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{Player, ReachTarget};
    use crate::pds::{Configuration, PushdownSystem};
    use crate::reachability::PAutomaton;
    use crate::sample::stacks_up_to;
    use std::collections::BTreeSet;

    fn configs(pds: &PushdownSystem, h: usize) -> Vec<Configuration> {
        pds.controls()
            .flat_map(|c| stacks_up_to(pds, h).into_iter().map(move |s| Configuration::new(c, s)))
            .collect()
    }

    fn reach_game(
        controls: &[&str],
        rules: &[(&str, &str, &str, &[&str])],
        owners: Vec<Player>,
        targets: &[&str],
    ) -> PushdownGame {
        let mut pds = PushdownSystem::from_names(controls, &["A", "_"], "_").unwrap();
        for (a, b, c, d) in rules {
            pds.add_rule_named(a, b, c, d).unwrap();
        }
        let cs: Vec<Configuration> = targets.iter().map(|t| pds.parse_config(t).unwrap()).collect();
        let t = ReachTarget::from_pautomaton(&PAutomaton::from_configurations(&pds, &cs).unwrap()).unwrap();
        PushdownGame::new(pds, owners, WinningCondition::Reachability(t)).unwrap()
    }

    fn member(r: &RegionAutomaton, g: &PushdownGame, c: &str) -> bool {
        r.member(&g.pds().parse_config(c).unwrap()).unwrap()
    }

    #[test]
    fn reachability_eloise_pops() {
        use Player::*;
        let g = reach_game(
            &["p", "q"],
            &[("p", "A", "q", &[]), ("p", "_", "p", &["_"])],
            vec![Eloise, Eloise],
            &["q : _"],
        );
        let r = solve_reachability_game(&g).unwrap();
        assert!(member(&r, &g, "p : A _"));
        assert!(member(&r, &g, "q : _"));
        assert!(!member(&r, &g, "p : _"));
    }

    #[test]
    fn reachability_abelard_escapes() {
        use Player::*;
        let rules: &[(&str, &str, &str, &[&str])] = &[("q", "A", "p", &[]), ("q", "A", "r", &[])];
        let g = reach_game(&["p", "q", "r"], rules, vec![Eloise, Abelard, Eloise], &["p : _"]);
        assert!(!member(&solve_reachability_game(&g).unwrap(), &g, "q : A _"));
        let g = reach_game(&["p", "q", "r"], rules, vec![Eloise, Abelard, Eloise], &["p : _", "r : _"]);
        assert!(member(&solve_reachability_game(&g).unwrap(), &g, "q : A _"));
    }

    fn loop_game(finals: &[&str], owner: Player) -> PushdownGame {
        let mut pds = PushdownSystem::from_names(&["p"], &["A", "_"], "_").unwrap();
        pds.add_rule_named("p", "A", "p", &[]).unwrap();
        pds.add_rule_named("p", "_", "p", &["_"]).unwrap();
        let f: BTreeSet<_> = finals.iter().map(|n| pds.control(n).unwrap()).collect();
        PushdownGame::new(pds, vec![owner], WinningCondition::Buchi(f)).unwrap()
    }

    #[test]
    fn buchi_pop_loop() {
        let g = loop_game(&["p"], Player::Eloise);
        let r = solve_buchi_game(&g).unwrap();
        let (p, a, bot) = (Control0, g.pds().symbol("A").unwrap(), g.pds().bottom());
        for n in 0..=5 {
            let mut stack = vec![a; n];
            stack.push(bot);
            assert!(r.member(&Configuration::new(p, stack)).unwrap());
        }
        let empty = solve_buchi_game(&loop_game(&[], Player::Eloise)).unwrap();
        for c in configs(g.pds(), 4) {
            assert!(!empty.member(&c).unwrap());
        }
    }

    #[allow(non_upper_case_globals)]
    const Control0: crate::symbols::Control = crate::symbols::Control(0);

    #[test]
    fn buchi_and_parity_agree_on_loop() {
        let g = loop_game(&["p"], Player::Abelard);
        let b = solve_buchi_game(&g).unwrap();
        let p = solve_parity_game(&g).unwrap();
        for c in configs(g.pds(), 5) {
            assert_eq!(b.member(&c).unwrap(), p.member(&c).unwrap());
        }
    }

    #[test]
    fn parity_constant_colours() {
        let mut pds = PushdownSystem::from_names(&["p", "q"], &["A", "_"], "_").unwrap();
        pds.add_rule_named("p", "A", "q", &["A", "A"]).unwrap();
        pds.add_rule_named("p", "_", "q", &["_"]).unwrap();
        pds.add_rule_named("q", "A", "p", &[]).unwrap();
        pds.add_rule_named("q", "_", "p", &["A", "_"]).unwrap();
        let owners = vec![Player::Eloise, Player::Abelard];
        let even = PushdownGame::new(pds.clone(), owners.clone(), WinningCondition::Parity(vec![0, 2])).unwrap();
        let odd = PushdownGame::new(pds.clone(), owners, WinningCondition::Parity(vec![1, 3])).unwrap();
        let (re, ro) = (solve_parity_game(&even).unwrap(), solve_parity_game(&odd).unwrap());
        for c in configs(&pds, 4) {
            assert!(re.member(&c).unwrap());
            assert!(!ro.member(&c).unwrap());
        }
    }

    #[test]
    fn wrong_condition_rejected() {
        let g = loop_game(&["p"], Player::Eloise);
        assert!(solve_reachability_game(&g).is_err());
    }
}
