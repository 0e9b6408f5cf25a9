use std::collections::BTreeSet;

use crate::automata::{minimal_sets, AltAutomaton, StateSet};
use crate::error::{invalid, Result};
use crate::pds::{Configuration, PushdownSystem, Rule};
use crate::symbols::{Control, State, Symbol};

use super::{Player, PushdownGame};

const SINK_BOTTOM: State = State(0);
const SINK_STAR: State = State(1);

/// Winning region (or an approximation of one) as an alternating automaton.
///
/// Leveled automata, used for Büchi and parity games, number their states
/// `s⊥ = 0`, `s* = 1` and `p^α = 2 + α·|Q| + p`. Reachability regions keep
/// the state numbering of their target automaton and add `s⊥`, `s*` above
/// it. Either way `(p, w)` is in the region iff `w` is accepted from
/// `entry(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionAutomaton {
    aut: AltAutomaton,
    controls: usize,
    bottom: Symbol,
    entries: Vec<State>,
    levels: Option<BTreeSet<usize>>,
    sink_bottom: State,
    sink_star: State,
}

impl RegionAutomaton {
    /// The automaton with only `s⊥` and `s*`.
    pub fn initial(pds: &PushdownSystem) -> Self {
        let mut aut = AltAutomaton::new(pds.symbols());
        aut.add_state(SINK_BOTTOM);
        aut.add_state(SINK_STAR);
        let mut out = RegionAutomaton {
            aut,
            controls: pds.num_controls(),
            bottom: pds.bottom(),
            entries: (0..pds.num_controls()).map(|p| leveled(pds.num_controls(), p, 0)).collect(),
            levels: Some(BTreeSet::new()),
            sink_bottom: SINK_BOTTOM,
            sink_star: SINK_STAR,
        };
        out.install_sinks(pds);
        out
    }

    /// Region automaton over an existing alternating automaton whose entry
    /// states are `embed`; `s⊥` and `s*` are added as fresh states.
    pub(crate) fn over_target(pds: &PushdownSystem, target: &AltAutomaton, embed: &[State]) -> Result<Self> {
        let mut aut = AltAutomaton::new(pds.symbols());
        for &s in target.states() {
            aut.add_state(s);
        }
        for &f in target.finals() {
            aut.set_final(f)?;
        }
        for (s, a, t) in target.transitions() {
            aut.add_transition(s, a, t.clone())?;
        }
        let sink_bottom = aut.fresh_state();
        let sink_star = aut.fresh_state();
        let mut out = RegionAutomaton {
            aut,
            controls: pds.num_controls(),
            bottom: pds.bottom(),
            entries: embed.to_vec(),
            levels: None,
            sink_bottom,
            sink_star,
        };
        out.install_sinks(pds);
        Ok(out)
    }

    fn install_sinks(&mut self, pds: &PushdownSystem) {
        let (bot, star) = (self.sink_bottom, self.sink_star);
        self.aut.set_final(bot).expect("state exists");
        for a in pds.stack_symbols() {
            self.aut
                .add_transition(star, a, StateSet::singleton(star))
                .expect("valid transition");
        }
        self.aut
            .add_transition(star, pds.bottom(), StateSet::singleton(bot))
            .expect("valid transition");
    }

    pub fn aut(&self) -> &AltAutomaton {
        &self.aut
    }

    pub(crate) fn aut_mut(&mut self) -> &mut AltAutomaton {
        &mut self.aut
    }

    pub fn add_transition(&mut self, s: State, a: Symbol, target: StateSet) -> Result<bool> {
        self.aut.add_transition(s, a, target)
    }

    pub fn num_controls(&self) -> usize {
        self.controls
    }

    pub fn bottom(&self) -> Symbol {
        self.bottom
    }

    pub fn sink_bottom(&self) -> State {
        self.sink_bottom
    }

    pub fn sink_star(&self) -> State {
        self.sink_star
    }

    /// State from which membership of `(p, ·)` is decided.
    pub fn entry(&self, p: Control) -> Result<State> {
        match self.entries.get(p.index()) {
            Some(&s) => Ok(s),
            None => invalid(format!("unknown control {p}")),
        }
    }

    pub fn is_leveled(&self) -> bool {
        self.levels.is_some()
    }

    /// Levels `α` whose states `p^α` are present.
    pub fn levels(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().flatten().copied()
    }

    pub fn has_level(&self, alpha: usize) -> bool {
        self.levels.as_ref().is_some_and(|l| l.contains(&alpha))
    }

    /// `p^α` in the leveled numbering, whether or not it is present.
    pub fn level_state(&self, p: Control, alpha: usize) -> State {
        leveled(self.controls, p.index(), alpha)
    }

    /// Inverse of [`Self::level_state`] for present level states.
    pub fn level_of(&self, s: State) -> Option<(Control, usize)> {
        let idx = s.index().checked_sub(2)?;
        if self.levels.is_none() || self.controls == 0 {
            return None;
        }
        let (alpha, p) = (idx / self.controls, idx % self.controls);
        self.has_level(alpha).then_some((Control::from(p), alpha))
    }

    /// Adds the states `p^α`; with `all` each gets `p^α -A-> {s*}` for
    /// `A ≠ ⊥` and `p^α -⊥-> {s⊥}`, so it accepts every stack.
    pub fn add_level(&mut self, pds: &PushdownSystem, alpha: usize, all: bool) -> Result<()> {
        let Some(levels) = self.levels.as_mut() else {
            return invalid("region automaton has no levels");
        };
        if !levels.insert(alpha) {
            return invalid(format!("level {alpha} already present"));
        }
        for p in pds.controls() {
            let s = self.level_state(p, alpha);
            self.aut.add_state(s);
            if all {
                for a in pds.stack_symbols() {
                    self.aut.add_transition(s, a, StateSet::singleton(self.sink_star))?;
                }
                self.aut
                    .add_transition(s, pds.bottom(), StateSet::singleton(self.sink_bottom))?;
            }
        }
        Ok(())
    }

    pub fn member(&self, c: &Configuration) -> Result<bool> {
        self.aut.accepts(self.entry(c.control)?, &c.stack)
    }

    /// Human-readable state name: `s_bot`, `s_star`, `p^α`, a control name
    /// for reachability entries, `sN` otherwise.
    pub fn state_name(&self, pds: &PushdownSystem, s: State) -> String {
        if s == self.sink_bottom {
            return "s_bot".into();
        }
        if s == self.sink_star {
            return "s_star".into();
        }
        if let Some((p, alpha)) = self.level_of(s) {
            return format!("{}^{}", pds.control_name(p), alpha);
        }
        if self.levels.is_none() {
            if let Some(p) = self.entries.iter().position(|&e| e == s) {
                return pds.control_name(Control::from(p)).to_string();
            }
        }
        format!("s{}", s.0)
    }
}

fn leveled(controls: usize, p: usize, alpha: usize) -> State {
    State::from(2 + alpha * controls + p)
}

/// `(p, w)` is in the region iff `w` is accepted from the entry of `p`.
pub fn region_member(region: &RegionAutomaton, c: &Configuration) -> Result<bool> {
    region.member(c)
}

/// Drops every transition whose target strictly contains another target
/// for the same source and symbol.
pub fn subsume(aut: &AltAutomaton) -> AltAutomaton {
    aut.subsume()
}

/// Moves the value of the states `p^α` onto `p^β`: transitions out of `p^β`
/// are dropped, each `p^α -A-> S` becomes `p^β -A-> π(S)` where `π` renames
/// level `α` to level `β` and fixes everything else, and the `p^α` states are
/// deleted. Occurrences of `p^β` already in targets keep pointing at the new
/// value.
pub fn project(region: &RegionAutomaton, alpha: usize, beta: usize) -> Result<RegionAutomaton> {
    if alpha == beta {
        return invalid("projection onto the same level");
    }
    for l in [alpha, beta] {
        if !region.has_level(l) {
            return invalid(format!("level {l} is not present"));
        }
    }
    let n = region.controls;
    let rename = |s: State| match region.level_of(s) {
        Some((p, l)) if l == alpha => leveled(n, p.index(), beta),
        _ => s,
    };
    let mut out = region.clone();
    let mut moved = Vec::new();
    for p in 0..n {
        let from = leveled(n, p, alpha);
        let to = leveled(n, p, beta);
        out.aut.clear_transitions_from(to);
        for (a, t) in region.aut.transitions_from(from) {
            moved.push((to, a, t.map(rename)));
        }
    }
    for p in 0..n {
        out.aut.clear_transitions_from(leveled(n, p, alpha));
    }
    for (s, a, t) in moved {
        out.aut.insert_minimal(s, a, t)?;
    }
    for p in 0..n {
        out.aut.remove_state(leveled(n, p, alpha))?;
    }
    if let Some(levels) = out.levels.as_mut() {
        levels.remove(&alpha);
    }
    Ok(out)
}

/// Minimal targets `S` for a transition reading the top symbol of `(p, A)`:
/// `start(rule)` gives the state each rule's pushed word is read from.
///
/// Éloïse needs one rule with a run into `S`; Abelard needs a run into `S`
/// for every rule, so his targets are minimal unions of one run target per
/// rule. An Abelard position without rules is won vacuously.
pub(crate) fn game_targets<'a>(
    aut: &AltAutomaton,
    owner: Player,
    rules: impl Iterator<Item = &'a Rule>,
    start: impl Fn(&Rule) -> State,
    vacuous: State,
) -> BTreeSet<StateSet> {
    match owner {
        Player::Eloise => {
            let mut all = Vec::new();
            for r in rules {
                all.extend(aut.run_targets(start(r), &r.push));
            }
            minimal_sets(all)
        }
        Player::Abelard => {
            let mut any_rule = false;
            let mut acc: BTreeSet<StateSet> = BTreeSet::from([StateSet::default()]);
            for r in rules {
                any_rule = true;
                let choices = aut.run_targets(start(r), &r.push);
                if choices.is_empty() {
                    return BTreeSet::new();
                }
                acc = minimal_sets(acc.iter().flat_map(|a| choices.iter().map(move |c| a.union(c))));
            }
            if any_rule {
                acc
            } else {
                BTreeSet::from([StateSet::singleton(vacuous)])
            }
        }
    }
}

/// Adds the states `p^fresh` with the transitions of one game
/// predecessor step: rules leaving `p` are read from `q^{Ω(p)}`, `Ω` being
/// the colour of the source control.
pub fn pre_step(region: &RegionAutomaton, game: &PushdownGame, fresh: usize) -> Result<RegionAutomaton> {
    let pds = game.pds();
    for p in pds.controls() {
        let c = game.colour(p) as usize;
        if !region.has_level(c) {
            return invalid(format!("level {c} needed by control {} is missing", pds.control_name(p)));
        }
    }
    let mut out = region.clone();
    out.add_level(pds, fresh, false)?;
    for p in pds.controls() {
        let colour = game.colour(p) as usize;
        let source = out.level_state(p, fresh);
        for a in pds.symbols() {
            let vacuous = if a == pds.bottom() {
                region.sink_bottom
            } else {
                region.sink_star
            };
            let targets = game_targets(
                &region.aut,
                game.owner(p),
                pds.rules_from(p, a),
                |r| region.level_state(r.to, colour),
                vacuous,
            );
            for t in targets {
                out.aut.insert_minimal(source, a, t)?;
            }
        }
    }
    Ok(out)
}
