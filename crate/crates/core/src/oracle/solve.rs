use std::collections::VecDeque;

use crate::error::Result;
use crate::games::{Player, PushdownGame, WinningCondition};
use crate::pds::Configuration;

use super::graph::{bounded_graph_with, BoundedGraph, Limits};

/// Explicit finite game: owners, colours and both edge directions.
struct Arena {
    owner: Vec<Player>,
    colour: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Arena {
    fn new(game: &PushdownGame, g: &BoundedGraph) -> Arena {
        let n = g.len();
        let mut owner = Vec::with_capacity(n);
        let mut colour = Vec::with_capacity(n);
        for c in g.configurations() {
            owner.push(game.owner(c.control));
            colour.push(game.colour(c.control));
        }
        owner.push(Player::Eloise);
        colour.push(match g.sink_winner() {
            Player::Eloise => 0,
            Player::Abelard => 1,
        });
        let succ: Vec<Vec<usize>> = (0..n).map(|i| g.successors(i).to_vec()).collect();
        let mut pred = vec![Vec::new(); n];
        for (v, out) in succ.iter().enumerate() {
            for &w in out {
                pred[w].push(v);
            }
        }
        Arena {
            owner,
            colour,
            succ,
            pred,
        }
    }

    /// Nodes of `sub` from which `player` forces a visit to `target` inside
    /// `sub`. Opponent nodes without moves in `sub` are attracted vacuously.
    fn attractor(&self, sub: &[bool], target: &[bool], player: Player) -> Vec<bool> {
        let n = self.owner.len();
        let mut attr = vec![false; n];
        let mut count: Vec<usize> = (0..n)
            .map(|v| self.succ[v].iter().filter(|&&w| sub[w]).count())
            .collect();
        let mut queue = VecDeque::new();
        for v in 0..n {
            if sub[v] && (target[v] || (self.owner[v] != player && count[v] == 0)) {
                attr[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            for &v in &self.pred[w] {
                if !sub[v] || attr[v] {
                    continue;
                }
                let pulled = if self.owner[v] == player {
                    true
                } else {
                    count[v] -= 1;
                    count[v] == 0
                };
                if pulled {
                    attr[v] = true;
                    queue.push_back(v);
                }
            }
        }
        attr
    }

    /// Recursive solution of the min-parity game restricted to `sub`;
    /// returns Éloïse's winning nodes.
    fn zielonka(&self, sub: &[bool]) -> Vec<bool> {
        let n = self.owner.len();
        let Some(d) = (0..n).filter(|&v| sub[v]).map(|v| self.colour[v]).min() else {
            return vec![false; n];
        };
        let player = if d % 2 == 0 { Player::Eloise } else { Player::Abelard };
        let top: Vec<bool> = (0..n).map(|v| sub[v] && self.colour[v] == d).collect();
        let x = self.attractor(sub, &top, player);
        let rest: Vec<bool> = (0..n).map(|v| sub[v] && !x[v]).collect();
        let eloise = self.zielonka(&rest);
        let opponent_wins: Vec<bool> = (0..n)
            .map(|v| rest[v] && (eloise[v] == (player == Player::Abelard)))
            .collect();
        if !opponent_wins.contains(&true) {
            return (0..n)
                .map(|v| sub[v] && player == Player::Eloise)
                .collect();
        }
        let b = self.attractor(sub, &opponent_wins, player.opponent());
        let rest: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
        let eloise = self.zielonka(&rest);
        (0..n)
            .map(|v| sub[v] && if b[v] { player == Player::Abelard } else { eloise[v] })
            .collect()
    }
}

/// Éloïse's winning nodes of the finite game on `g`, the sink included.
/// Reachability uses the attractor of the target; Büchi and parity use
/// recursive colour peeling.
pub fn finite_game_region(game: &PushdownGame, g: &BoundedGraph) -> Result<Vec<bool>> {
    let arena = Arena::new(game, g);
    let all = vec![true; g.len()];
    match game.condition() {
        WinningCondition::Reachability(target) => {
            let mut goal = Vec::with_capacity(g.len());
            for c in g.configurations() {
                goal.push(target.accepts(c)?);
            }
            goal.push(g.sink_winner() == Player::Eloise);
            Ok(arena.attractor(&all, &goal, Player::Eloise))
        }
        _ => Ok(arena.zielonka(&all)),
    }
}

/// Under- and over-approximations of the winning region on configurations
/// of height at most `h`: the sink is lost, respectively won, by Éloïse.
#[derive(Debug, Clone)]
pub struct Bracket {
    graph: BoundedGraph,
    under: Vec<bool>,
    over: Vec<bool>,
}

impl Bracket {
    pub fn height(&self) -> usize {
        self.graph.height()
    }

    pub fn configurations(&self) -> &[Configuration] {
        self.graph.configurations()
    }

    pub fn under(&self, c: &Configuration) -> Option<bool> {
        self.graph.node(c).map(|i| self.under[i])
    }

    pub fn over(&self, c: &Configuration) -> Option<bool> {
        self.graph.node(c).map(|i| self.over[i])
    }

    /// Configurations on which both approximations agree.
    pub fn decided(&self) -> usize {
        (0..self.graph.sink()).filter(|&i| self.under[i] == self.over[i]).count()
    }
}

pub fn bracket_region(game: &PushdownGame, h: usize) -> Result<Bracket> {
    bracket_region_with(game, h, &Limits::default())
}

pub fn bracket_region_with(game: &PushdownGame, h: usize, limits: &Limits) -> Result<Bracket> {
    let lost = bounded_graph_with(game.pds(), h, Player::Abelard, limits)?;
    let won = bounded_graph_with(game.pds(), h, Player::Eloise, limits)?;
    let under = finite_game_region(game, &lost)?;
    let over = finite_game_region(game, &won)?;
    Ok(Bracket {
        graph: lost,
        under,
        over,
    })
}
