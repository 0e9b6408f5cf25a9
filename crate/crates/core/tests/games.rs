use std::collections::BTreeSet;

use pdsat::games::{
    solve_buchi_game, solve_parity_game, solve_parity_game_with, solve_reachability_game, Observer, Player,
    PushdownGame, RegionAutomaton, ReachTarget, WinningCondition,
};
use pdsat::oracle::bracket_region;
use pdsat::pds::{Configuration, PushdownSystem};
use pdsat::reachability::prestar;
use pdsat::sample::{random_game, random_target, stacks_up_to, GameKind};
use pdsat::Control;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn configs(pds: &PushdownSystem, h: usize) -> Vec<Configuration> {
    pds.controls()
        .flat_map(|c| stacks_up_to(pds, h).into_iter().map(move |s| Configuration::new(c, s)))
        .collect()
}

fn solve(g: &PushdownGame) -> RegionAutomaton {
    match g.condition() {
        WinningCondition::Reachability(_) => solve_reachability_game(g).unwrap(),
        WinningCondition::Buchi(_) => solve_buchi_game(g).unwrap(),
        WinningCondition::Parity(_) => solve_parity_game(g).unwrap(),
    }
}

fn check_brackets(kind: GameKind, seed: u64, games: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..games {
        let g = random_game(&mut rng, kind);
        let region = solve(&g);
        for h in [3, 4] {
            let b = bracket_region(&g, h).unwrap();
            for c in b.configurations() {
                let m = region.member(c).unwrap();
                let (u, o) = (b.under(c).unwrap(), b.over(c).unwrap());
                assert!(
                    (!u || m) && (!m || o),
                    "{kind:?} game {i} h={h}: {} under={u} member={m} over={o}\n{:?}",
                    g.pds().format_config(c),
                    g
                );
            }
        }
    }
}

#[test]
fn reachability_within_brackets() {
    check_brackets(GameKind::Reachability, 101, 40);
}

#[test]
fn buchi_within_brackets() {
    check_brackets(GameKind::Buchi, 102, 40);
}

#[test]
fn parity_within_brackets() {
    check_brackets(GameKind::Parity, 103, 40);
}

#[test]
fn one_player_reachability_is_prestar() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..40 {
        let g = random_game(&mut rng, GameKind::Reachability);
        let pds = g.pds().clone();
        let target = random_target(&mut rng, &pds, 2);
        let owners = vec![Player::Eloise; pds.num_controls()];
        let t = ReachTarget::from_pautomaton(&target).unwrap();
        let game = PushdownGame::new(pds.clone(), owners, WinningCondition::Reachability(t)).unwrap();
        let region = solve_reachability_game(&game).unwrap();
        let pre = prestar(&pds, &target).unwrap();
        for c in configs(&pds, 5) {
            assert_eq!(region.member(&c).unwrap(), pre.accepts(&c).unwrap());
        }
    }
}

#[test]
fn buchi_is_two_colour_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..40 {
        let g = random_game(&mut rng, GameKind::Buchi);
        let colours = g.pds().controls().map(|p| g.colour(p)).collect();
        let parity = PushdownGame::new(g.pds().clone(), g.owners().to_vec(), WinningCondition::Parity(colours)).unwrap();
        let (b, p) = (solve_buchi_game(&g).unwrap(), solve_parity_game(&parity).unwrap());
        for c in configs(g.pds(), 5) {
            assert_eq!(b.member(&c).unwrap(), p.member(&c).unwrap());
        }
    }
}

#[test]
fn determinacy_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..30 {
        let g = random_game(&mut rng, GameKind::Parity);
        let d = g.dual().unwrap();
        let (r, rd) = (solve_parity_game(&g).unwrap(), solve_parity_game(&d).unwrap());
        for c in configs(g.pds(), 3) {
            assert_ne!(r.member(&c).unwrap(), rd.member(&c).unwrap(), "{}", g.pds().format_config(&c));
        }
    }
}

#[test]
fn buchi_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..20 {
        let g = random_game(&mut rng, GameKind::Buchi);
        let all: BTreeSet<Control> = g.pds().controls().collect();
        for (f, expect) in [(BTreeSet::new(), false), (all, true)] {
            let h = PushdownGame::new(g.pds().clone(), g.owners().to_vec(), WinningCondition::Buchi(f)).unwrap();
            let r = solve_buchi_game(&h).unwrap();
            for c in configs(g.pds(), 4) {
                assert_eq!(r.member(&c).unwrap(), expect);
            }
        }
    }
}

/// Records, per fixpoint computation, the accepted short configurations from
/// each level entry after every iteration.
struct Trace {
    pds: PushdownSystem,
    runs: Vec<(usize, Vec<BTreeSet<Configuration>>)>,
}

impl Observer for Trace {
    fn projected(&mut self, level: usize, iteration: usize, region: &RegionAutomaton) {
        let accepted: BTreeSet<Configuration> = configs(&self.pds, 5)
            .into_iter()
            .filter(|c| {
                region
                    .aut()
                    .accepts(region.level_state(c.control, level), &c.stack)
                    .unwrap()
            })
            .collect();
        if iteration == 1 {
            self.runs.push((level, Vec::new()));
        }
        let run = self.runs.iter_mut().rev().find(|(l, _)| *l == level).unwrap();
        run.1.push(accepted);
    }
}

#[test]
fn approximations_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for i in 0..60 {
        let kind = if i % 2 == 0 { GameKind::Buchi } else { GameKind::Parity };
        let g = random_game(&mut rng, kind);
        let mut trace = Trace {
            pds: g.pds().clone(),
            runs: Vec::new(),
        };
        solve_parity_game_with(&g, &mut trace).unwrap();
        for (level, seq) in &trace.runs {
            for w in seq.windows(2) {
                if level % 2 == 0 {
                    assert!(w[1].is_subset(&w[0]), "level {level} grew");
                } else {
                    assert!(w[0].is_subset(&w[1]), "level {level} shrank");
                }
            }
        }
    }
}
