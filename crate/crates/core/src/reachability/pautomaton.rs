use std::collections::BTreeSet;

use crate::automata::{Label, Nfa};
use crate::error::{invalid, Result};
use crate::pds::{Configuration, PushdownSystem};
use crate::symbols::{Control, State};

/// A finite automaton over the stack alphabet together with the state each
/// control enters from. `(p, w)` is accepted iff `w` is accepted from the
/// entry state of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAutomaton {
    aut: Nfa,
    embed: Vec<State>,
}

impl PAutomaton {
    /// `embed[c]` is the entry state of control `c`; entries must be distinct
    /// states of `aut`.
    pub fn new(aut: Nfa, embed: Vec<State>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &s in &embed {
            aut.check_state(s)?;
            if !seen.insert(s) {
                return invalid(format!("state {s} embeds two controls"));
            }
        }
        Ok(PAutomaton { aut, embed })
    }

    /// One state per control (state `i` is control `i`), no transitions.
    pub fn empty(pds: &PushdownSystem) -> Self {
        let aut = Nfa::with_states(pds.num_controls(), pds.symbols());
        let embed = (0..pds.num_controls()).map(State::from).collect();
        PAutomaton { aut, embed }
    }

    /// Accepts exactly the given configurations, one fresh path per stack.
    pub fn from_configurations<'a>(
        pds: &PushdownSystem,
        configs: impl IntoIterator<Item = &'a Configuration>,
    ) -> Result<Self> {
        let mut out = Self::empty(pds);
        for c in configs {
            pds.check_configuration(c)?;
            let mut at = out.embed[c.control.index()];
            for &a in &c.stack {
                let next = out.aut.add_state();
                out.aut.add_symbol(at, a, next)?;
                at = next;
            }
            out.aut.set_final(at)?;
        }
        Ok(out)
    }

    pub fn nfa(&self) -> &Nfa {
        &self.aut
    }

    pub fn into_nfa(self) -> Nfa {
        self.aut
    }

    pub fn embed(&self) -> &[State] {
        &self.embed
    }

    pub fn num_controls(&self) -> usize {
        self.embed.len()
    }

    pub fn entry(&self, c: Control) -> Result<State> {
        match self.embed.get(c.index()) {
            Some(&s) => Ok(s),
            None => invalid(format!("control {c} is not embedded")),
        }
    }

    /// Inverse of the embedding.
    pub fn control_of(&self, s: State) -> Option<Control> {
        self.embed.iter().position(|&e| e == s).map(Control::from)
    }

    pub fn is_embedded(&self, s: State) -> bool {
        self.embed.contains(&s)
    }

    pub fn accepts(&self, c: &Configuration) -> Result<bool> {
        self.aut.accepts(self.entry(c.control)?, &c.stack)
    }

    /// Entry states must be non-final and have no incoming transitions.
    pub fn check_invariants(&self) -> Result<()> {
        for (from, label, to) in self.aut.transitions() {
            if self.is_embedded(to) {
                let what = match label {
                    Label::Eps => "ε".to_string(),
                    Label::Sym(a) => a.to_string(),
                };
                return invalid(format!(
                    "transition {from} --{what}--> {to} enters the entry state of control {}",
                    self.control_of(to).expect("embedded")
                ));
            }
        }
        for &s in &self.embed {
            if self.aut.is_final(s) {
                return invalid(format!("entry state {s} is final"));
            }
        }
        Ok(())
    }

    /// Repairs the entry-state invariants by moving each offending entry to
    /// a fresh copy with the same outgoing transitions. Returns the repaired
    /// automaton and one message per moved control.
    pub fn normalized(&self) -> (PAutomaton, Vec<String>) {
        let mut aut = self.aut.clone();
        let mut embed = self.embed.clone();
        let mut warnings = Vec::new();
        let entered: BTreeSet<State> = aut.transitions().map(|(_, _, to)| to).collect();
        for (c, slot) in embed.iter_mut().enumerate() {
            let old = *slot;
            if !entered.contains(&old) && !aut.is_final(old) {
                continue;
            }
            let copy = aut.add_state();
            let outgoing: Vec<(Label, State)> = self.aut.out(old).collect();
            for (label, to) in outgoing {
                aut.add_transition(copy, label, to).expect("states exist");
            }
            *slot = copy;
            warnings.push(format!("control {c}: entry state {old} copied to {copy}"));
        }
        (PAutomaton { aut, embed }, warnings)
    }

    /// Adds fresh entry states for controls `num_controls()..n`.
    pub(crate) fn extend_controls(&mut self, n: usize) {
        while self.embed.len() < n {
            let s = self.aut.add_state();
            self.embed.push(s);
        }
    }

    /// Keeps the entries of the first `n` controls only.
    pub(crate) fn restrict_controls(&mut self, n: usize) {
        self.embed.truncate(n);
    }

    pub(crate) fn from_parts(aut: Nfa, embed: Vec<State>) -> Self {
        PAutomaton { aut, embed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pds::PushdownSystem;

    fn sys() -> PushdownSystem {
        PushdownSystem::from_names(&["p", "q"], &["A", "_"], "_").unwrap()
    }

    #[test]
    fn configurations_are_accepted_exactly() {
        let p = sys();
        let c = p.parse_config("p : A _").unwrap();
        let a = PAutomaton::from_configurations(&p, [&c]).unwrap();
        assert!(a.accepts(&c).unwrap());
        assert!(!a.accepts(&p.parse_config("p : _").unwrap()).unwrap());
        assert!(!a.accepts(&p.parse_config("q : A _").unwrap()).unwrap());
        assert!(a.check_invariants().is_ok());
    }

    #[test]
    fn normalization_copies_entered_controls() {
        let p = sys();
        let mut nfa = Nfa::with_states(3, p.symbols());
        let (a, bot) = (p.symbol("A").unwrap(), p.bottom());
        nfa.add_symbol(State(0), a, State(0)).unwrap();
        nfa.add_symbol(State(0), bot, State(2)).unwrap();
        nfa.set_final(State(2)).unwrap();
        let pa = PAutomaton::new(nfa, vec![State(0), State(1)]).unwrap();
        assert!(pa.check_invariants().is_err());
        let (fixed, warnings) = pa.normalized();
        assert_eq!(warnings.len(), 1);
        assert!(fixed.check_invariants().is_ok());
        for stack in [vec![bot], vec![a, bot], vec![a, a, a, bot]] {
            let c = Configuration::new(Control(0), stack);
            assert_eq!(fixed.accepts(&c).unwrap(), pa.accepts(&c).unwrap());
        }
    }

    #[test]
    fn duplicate_embedding_rejected() {
        let nfa = Nfa::with_states(1, []);
        assert!(PAutomaton::new(nfa, vec![State(0), State(0)]).is_err());
    }
}
