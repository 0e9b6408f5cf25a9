use std::collections::BTreeSet;
use std::fmt;

use crate::automata::AltAutomaton;
use crate::error::{invalid, Result};
use crate::pds::{Configuration, PushdownSystem};
use crate::reachability::PAutomaton;
use crate::symbols::{Control, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eloise => "E",
            Player::Abelard => "A",
        })
    }
}

/// Target configurations of a reachability game: an alternating automaton
/// with one entry state per control. Entry states have no incoming
/// transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTarget {
    aut: AltAutomaton,
    embed: Vec<State>,
}

impl ReachTarget {
    pub fn new(aut: AltAutomaton, embed: Vec<State>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &s in &embed {
            aut.check_state(s)?;
            if !seen.insert(s) {
                return invalid(format!("state {s} embeds two controls"));
            }
        }
        if let Some((from, a, _)) = aut.transitions().find(|(_, _, t)| t.iter().any(|u| seen.contains(&u))) {
            return invalid(format!(
                "target transition from {from} on {a} enters an entry state"
            ));
        }
        Ok(ReachTarget { aut, embed })
    }

    pub fn from_pautomaton(a: &PAutomaton) -> Result<Self> {
        a.check_invariants()?;
        Self::new(AltAutomaton::from_nfa(a.nfa()), a.embed().to_vec())
    }

    pub fn aut(&self) -> &AltAutomaton {
        &self.aut
    }

    pub fn embed(&self) -> &[State] {
        &self.embed
    }

    pub fn accepts(&self, c: &Configuration) -> Result<bool> {
        match self.embed.get(c.control.index()) {
            Some(&s) => self.aut.accepts(s, &c.stack),
            None => invalid(format!("control {} is not embedded", c.control)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WinningCondition {
    Reachability(ReachTarget),
    /// Controls that must be visited infinitely often.
    Buchi(BTreeSet<Control>),
    /// Colour of each control; the least colour seen infinitely often must
    /// be even.
    Parity(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownGame {
    pds: PushdownSystem,
    owners: Vec<Player>,
    condition: WinningCondition,
}

impl PushdownGame {
    /// Validates the system, the owner map and the condition. Büchi and
    /// parity games must be total: every `(q, A)` has at least one rule.
    pub fn new(pds: PushdownSystem, owners: Vec<Player>, condition: WinningCondition) -> Result<Self> {
        pds.check()?;
        if owners.len() != pds.num_controls() {
            return invalid(format!(
                "{} owners given for {} controls",
                owners.len(),
                pds.num_controls()
            ));
        }
        match &condition {
            WinningCondition::Reachability(target) => {
                if target.embed.len() != pds.num_controls() {
                    return invalid("target automaton does not embed every control");
                }
                if let Some(a) = target
                    .aut
                    .alphabet()
                    .iter()
                    .find(|a| !pds.symbol_table().contains(a.0))
                {
                    return invalid(format!("target symbol {a} is not a stack symbol"));
                }
            }
            WinningCondition::Buchi(finals) => {
                if let Some(c) = finals.iter().find(|c| !pds.control_table().contains(c.0)) {
                    return invalid(format!("unknown control {c} in Büchi set"));
                }
            }
            WinningCondition::Parity(colours) => {
                if colours.len() != pds.num_controls() {
                    return invalid(format!(
                        "{} colours given for {} controls",
                        colours.len(),
                        pds.num_controls()
                    ));
                }
            }
        }
        let game = PushdownGame { pds, owners, condition };
        if !matches!(game.condition, WinningCondition::Reachability(_)) {
            game.check_total()?;
        }
        Ok(game)
    }

    pub fn check_total(&self) -> Result<()> {
        for p in self.pds.controls() {
            for a in self.pds.symbols() {
                if self.pds.rules_from(p, a).next().is_none() {
                    return invalid(format!(
                        "game is not total: no rule for ({}, {})",
                        self.pds.control_name(p),
                        self.pds.symbol_name(a)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn pds(&self) -> &PushdownSystem {
        &self.pds
    }

    pub fn owner(&self, p: Control) -> Player {
        self.owners[p.index()]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn condition(&self) -> &WinningCondition {
        &self.condition
    }

    /// Colour of a control: 0 on the Büchi set and 1 elsewhere for Büchi
    /// games, the given colour for parity games, 0 for reachability games.
    pub fn colour(&self, p: Control) -> u32 {
        match &self.condition {
            WinningCondition::Reachability(_) => 0,
            WinningCondition::Buchi(finals) => u32::from(!finals.contains(&p)),
            WinningCondition::Parity(colours) => colours[p.index()],
        }
    }

    /// Largest colour, padded up to the next odd number.
    pub fn max_colour(&self) -> u32 {
        match &self.condition {
            WinningCondition::Parity(colours) => {
                let m = colours.iter().copied().max().unwrap_or(0);
                m | 1
            }
            _ => 1,
        }
    }

    /// The game seen from Abelard: owners swapped and every colour shifted
    /// up by one. Büchi games become parity games over colours `{1, 2}`.
    pub fn dual(&self) -> Result<PushdownGame> {
        let colours = match &self.condition {
            WinningCondition::Reachability(_) => {
                return invalid("the dual of a reachability game is not supported");
            }
            _ => self.pds.controls().map(|p| self.colour(p) + 1).collect(),
        };
        Ok(PushdownGame {
            pds: self.pds.clone(),
            owners: self.owners.iter().map(|o| o.opponent()).collect(),
            condition: WinningCondition::Parity(colours),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_sys() -> PushdownSystem {
        let mut p = PushdownSystem::from_names(&["p"], &["A", "_"], "_").unwrap();
        p.add_rule_named("p", "A", "p", &[]).unwrap();
        p.add_rule_named("p", "_", "p", &["_"]).unwrap();
        p
    }

    #[test]
    fn totality_required_for_infinite_conditions() {
        let mut p = PushdownSystem::from_names(&["p"], &["A", "_"], "_").unwrap();
        p.add_rule_named("p", "A", "p", &[]).unwrap();
        let err = PushdownGame::new(p, vec![Player::Eloise], WinningCondition::Parity(vec![0]));
        assert!(err.is_err());
        assert!(PushdownGame::new(total_sys(), vec![Player::Eloise], WinningCondition::Parity(vec![0])).is_ok());
    }

    #[test]
    fn colours_and_padding() {
        let g = PushdownGame::new(total_sys(), vec![Player::Eloise], WinningCondition::Parity(vec![2])).unwrap();
        assert_eq!(g.max_colour(), 3);
        let d = g.dual().unwrap();
        assert_eq!(d.colour(Control(0)), 3);
        assert_eq!(d.max_colour(), 3);
        assert_eq!(d.owner(Control(0)), Player::Abelard);
        let b = PushdownGame::new(
            total_sys(),
            vec![Player::Eloise],
            WinningCondition::Buchi(BTreeSet::from([Control(0)])),
        )
        .unwrap();
        assert_eq!(b.colour(Control(0)), 0);
        assert_eq!(b.max_colour(), 1);
    }

    #[test]
    fn owner_count_checked() {
        assert!(PushdownGame::new(total_sys(), vec![], WinningCondition::Parity(vec![0])).is_err());
    }
}
