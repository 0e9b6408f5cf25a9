use std::collections::{BTreeMap, BTreeSet};

use crate::automata::nfa::{Label, Nfa};
use crate::error::{invalid, Result};
use crate::symbols::{State, Symbol};

/// Sorted, duplicate-free set of states; the canonical form of an
/// alternating transition target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(Vec<State>);

impl StateSet {
    pub fn new(states: impl IntoIterator<Item = State>) -> Self {
        let mut v: Vec<State> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }

    pub fn singleton(s: State) -> Self {
        StateSet(vec![s])
    }

    pub fn as_slice(&self) -> &[State] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: State) -> bool {
        self.0.binary_search(&s).is_ok()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut j = 0;
        for &s in &self.0 {
            while j < other.0.len() && other.0[j] < s {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != s {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet::new(self.iter().chain(other.iter()))
    }

    pub fn map(&self, f: impl Fn(State) -> State) -> StateSet {
        StateSet::new(self.iter().map(f))
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<I: IntoIterator<Item = State>>(iter: I) -> Self {
        StateSet::new(iter)
    }
}

/// Keeps the ⊆-minimal members of `sets`.
pub(crate) fn minimal_sets(sets: impl IntoIterator<Item = StateSet>) -> BTreeSet<StateSet> {
    let mut all: Vec<StateSet> = sets.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.dedup();
    let mut kept: Vec<StateSet> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.into_iter().collect()
}

/// Alternating automaton: a transition `s -A-> S` requires the rest of the
/// word to be accepted from every state of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AltAutomaton {
    states: BTreeSet<State>,
    alphabet: BTreeSet<Symbol>,
    finals: BTreeSet<State>,
    transitions: BTreeMap<(State, Symbol), BTreeSet<StateSet>>,
}

impl AltAutomaton {
    pub fn new(alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        AltAutomaton {
            alphabet: alphabet.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Embeds an ε-free automaton with singleton targets. ε-transitions are
    /// closed away first.
    pub fn from_nfa(nfa: &Nfa) -> Self {
        let nfa = nfa.eps_closure();
        let mut alt = AltAutomaton::new(nfa.alphabet().iter().copied());
        for s in nfa.states() {
            alt.states.insert(s);
        }
        alt.finals = nfa.finals().clone();
        for (s, l, t) in nfa.transitions() {
            if let Label::Sym(a) = l {
                alt.transitions
                    .entry((s, a))
                    .or_default()
                    .insert(StateSet::singleton(t));
            }
        }
        alt
    }

    pub fn add_state(&mut self, s: State) -> bool {
        self.states.insert(s)
    }

    /// A state id one above the current maximum.
    pub fn fresh_state(&mut self) -> State {
        let s = self.states.iter().next_back().map_or(State(0), |s| State(s.0 + 1));
        self.states.insert(s);
        s
    }

    pub fn has_state(&self, s: State) -> bool {
        self.states.contains(&s)
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn set_final(&mut self, s: State) -> Result<()> {
        self.check_state(s)?;
        self.finals.insert(s);
        Ok(())
    }

    pub fn check_state(&self, s: State) -> Result<()> {
        if self.states.contains(&s) {
            Ok(())
        } else {
            invalid(format!("unknown automaton state {s}"))
        }
    }

    pub fn check_symbol(&self, a: Symbol) -> Result<()> {
        if self.alphabet.contains(&a) {
            Ok(())
        } else {
            invalid(format!("symbol {a} is not in the automaton alphabet"))
        }
    }

    fn check_transition(&self, s: State, a: Symbol, target: &StateSet) -> Result<()> {
        self.check_state(s)?;
        self.check_symbol(a)?;
        if target.is_empty() {
            return invalid("alternating transition with an empty target set");
        }
        for t in target.iter() {
            self.check_state(t)?;
        }
        Ok(())
    }

    /// Adds `s -a-> target` verbatim; returns whether it was new.
    pub fn add_transition(&mut self, s: State, a: Symbol, target: StateSet) -> Result<bool> {
        self.check_transition(s, a, &target)?;
        Ok(self.transitions.entry((s, a)).or_default().insert(target))
    }

    /// Adds `s -a-> target` unless some existing `s -a-> S'` has
    /// `S' ⊆ target`; existing transitions strictly above `target` are
    /// dropped. Returns whether the transition set changed.
    pub fn insert_minimal(&mut self, s: State, a: Symbol, target: StateSet) -> Result<bool> {
        self.check_transition(s, a, &target)?;
        let entry = self.transitions.entry((s, a)).or_default();
        if entry.iter().any(|t| t.is_subset(&target)) {
            return Ok(false);
        }
        entry.retain(|t| !target.is_subset(t));
        entry.insert(target);
        Ok(true)
    }

    pub fn targets(&self, s: State, a: Symbol) -> impl Iterator<Item = &StateSet> + '_ {
        self.transitions.get(&(s, a)).into_iter().flatten()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Symbol, &StateSet)> + '_ {
        self.transitions
            .iter()
            .flat_map(|(&(s, a), ts)| ts.iter().map(move |t| (s, a, t)))
    }

    pub fn transitions_from(&self, s: State) -> impl Iterator<Item = (Symbol, &StateSet)> + '_ {
        self.transitions
            .range((s, Symbol(0))..=(s, Symbol(u32::MAX)))
            .flat_map(|(&(_, a), ts)| ts.iter().map(move |t| (a, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.values().map(BTreeSet::len).sum()
    }

    pub fn clear_transitions_from(&mut self, s: State) {
        let keys: Vec<(State, Symbol)> = self
            .transitions
            .range((s, Symbol(0))..=(s, Symbol(u32::MAX)))
            .map(|(k, _)| *k)
            .collect();
        for k in keys {
            self.transitions.remove(&k);
        }
    }

    /// Removes a state and its outgoing transitions. Fails if any remaining
    /// transition still targets it.
    pub fn remove_state(&mut self, s: State) -> Result<()> {
        self.clear_transitions_from(s);
        if self.transitions().any(|(_, _, t)| t.contains(s)) {
            return invalid(format!("state {s} is still the target of a transition"));
        }
        self.states.remove(&s);
        self.finals.remove(&s);
        Ok(())
    }

    /// Whether some accepting run over `word` starts from `{start}`.
    ///
    /// Acceptance of a suffix is a property of single states, so the states
    /// accepting each suffix are computed right to left.
    pub fn accepts(&self, start: State, word: &[Symbol]) -> Result<bool> {
        self.check_state(start)?;
        for &a in word {
            self.check_symbol(a)?;
        }
        let mut accepting: BTreeSet<State> = self.finals.clone();
        for &a in word.iter().rev() {
            accepting = self
                .states
                .iter()
                .copied()
                .filter(|&s| {
                    self.targets(s, a)
                        .any(|t| t.iter().all(|u| accepting.contains(&u)))
                })
                .collect();
            if accepting.is_empty() {
                return Ok(false);
            }
        }
        Ok(accepting.contains(&start))
    }

    /// All ⊆-minimal `S` such that `start -word-> S` is a run.
    pub fn run_targets(&self, start: State, word: &[Symbol]) -> BTreeSet<StateSet> {
        let mut current: BTreeSet<StateSet> = BTreeSet::from([StateSet::singleton(start)]);
        for &a in word {
            let mut next: Vec<StateSet> = Vec::new();
            for set in &current {
                next.extend(self.step(set, a));
            }
            current = minimal_sets(next);
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Minimal unions of one `a`-target per member of `set`.
    pub fn step(&self, set: &StateSet, a: Symbol) -> BTreeSet<StateSet> {
        let mut partial: BTreeSet<StateSet> = BTreeSet::from([StateSet::default()]);
        for s in set.iter() {
            let choices: Vec<&StateSet> = self.targets(s, a).collect();
            if choices.is_empty() {
                return BTreeSet::new();
            }
            partial = minimal_sets(
                partial
                    .iter()
                    .flat_map(|p| choices.iter().map(move |c| p.union(c))),
            );
        }
        partial
    }

    /// Copy without transitions that are subsumed by a smaller target.
    pub fn subsume(&self) -> AltAutomaton {
        let mut out = self.clone();
        for targets in out.transitions.values_mut() {
            *targets = minimal_sets(std::mem::take(targets));
        }
        out
    }
}
