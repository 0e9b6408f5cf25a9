use std::collections::BTreeSet;

use crate::automata::{pattern_forbidden_factors, product_intersect, Label, Nfa};
use crate::derivation::actions::{Action, ActionAlphabet};
use crate::error::{invalid, Result};
use crate::pds::PushdownSystem;
use crate::symbols::{Control, State, Symbol};

/// An automaton together with the state it is read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub aut: Nfa,
    pub start: State,
}

impl Language {
    pub fn new(aut: Nfa, start: State) -> Result<Self> {
        aut.check_state(start)?;
        Ok(Language { aut, start })
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.aut.accepts(self.start, w).unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.aut.is_empty_from(self.start)
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        self.aut.alphabet()
    }

    /// Same language on the useful states only, renumbered.
    pub fn trim(&self) -> Language {
        let co = self.aut.coreachable();
        let keep: Vec<State> = self
            .aut
            .reachable([self.start])
            .into_iter()
            .filter(|s| co.contains(s))
            .collect();
        let alphabet = self.aut.alphabet().iter().copied();
        if keep.is_empty() {
            return Language {
                aut: Nfa::with_states(1, alphabet),
                start: State(0),
            };
        }
        let index = |s: State| keep.binary_search(&s).ok().map(State::from);
        let mut aut = Nfa::with_states(keep.len(), alphabet);
        for (s, l, t) in self.aut.transitions() {
            if let (Some(s), Some(t)) = (index(s), index(t)) {
                aut.add_transition(s, l, t).expect("renumbered state");
            }
        }
        for &f in self.aut.finals() {
            if let Some(f) = index(f) {
                aut.set_final(f).expect("renumbered state");
            }
        }
        Language {
            aut,
            start: index(self.start).expect("start is useful"),
        }
    }

    /// The mirror language: every accepted word read backwards.
    pub fn reversed(&self) -> Language {
        let n = self.aut.num_states();
        let mut aut = Nfa::with_states(n + 1, self.aut.alphabet().iter().copied());
        let start = State::from(n);
        for (s, l, t) in self.aut.transitions() {
            aut.add_transition(t, l, s).expect("existing state");
        }
        for &f in self.aut.finals() {
            aut.add_transition(start, Label::Eps, f).expect("existing state");
        }
        aut.set_final(self.start).expect("existing state");
        Language { aut, start }.trim()
    }

    fn intersect(&self, other: &Nfa) -> Result<Language> {
        let product = product_intersect(&self.aut, other)?;
        let start = product.pair(self.start, State(0));
        Ok(Language {
            aut: product.nfa,
            start,
        }
        .trim())
    }

    /// Copy over the full action alphabet. Errors on a letter that is not
    /// an action.
    fn over_actions(&self, actions: &ActionAlphabet) -> Result<Language> {
        for &a in self.aut.alphabet() {
            if actions.decode(a).is_none() {
                return invalid(format!("letter {a} is not an action"));
            }
        }
        Ok(Language {
            aut: self.aut.relabel(actions.symbols(), |a| a)?,
            start: self.start,
        })
    }
}

/// Automaton over push/pop actions whose words from `q0` to `qf` are the
/// behaviours of the rule sequences leading from `q0` to `qf`.
///
/// `pA -> qBC` reads `A₋ C₊ B₊`, `pA -> qB` reads `A₋ B₊` and `pA -> q`
/// reads `A₋`. States `0..|Q|` are the control states.
pub fn behaviour_automaton(pds: &PushdownSystem, q0: Control, qf: Control) -> Result<Language> {
    pds.check()?;
    for c in [q0, qf] {
        if c.index() >= pds.num_controls() {
            return invalid(format!("unknown control {c}"));
        }
    }
    let bottom = pds.bottom();
    if let Some(r) = pds
        .rules()
        .find(|r| r.symbol == bottom || r.push.contains(&bottom))
    {
        return invalid(format!(
            "derivation needs a system without bottom rules, found `{}`",
            pds.format_rule(r)
        ));
    }
    let actions = ActionAlphabet::for_system(pds);
    let mut aut = Nfa::with_states(pds.num_controls(), actions.symbols());
    for r in pds.rules() {
        let mut labels = vec![actions.pop(r.symbol)?];
        for &b in r.push.iter().rev() {
            labels.push(actions.push(b)?);
        }
        let mut at = State::from(r.from.index());
        for (i, &x) in labels.iter().enumerate() {
            let next = if i + 1 == labels.len() {
                State::from(r.to.index())
            } else {
                aut.add_state()
            };
            aut.add_symbol(at, x, next)?;
            at = next;
        }
    }
    aut.set_final(State::from(qf.index()))?;
    Language::new(aut, State::from(q0.index()))
}

/// Automaton for the reduced forms of the words of `lang`.
///
/// ε-transitions `p -> q` are added while `p -A₊-> ε* -A₋-> q` holds, then
/// ε is eliminated and words with a factor `A₊A₋` are cut out.
pub fn benois_reduce(lang: &Language, actions: &ActionAlphabet) -> Result<Language> {
    let lang = lang.over_actions(actions)?;
    let mut aut = lang.aut;
    loop {
        let mut added: Vec<(State, State)> = Vec::new();
        for p in aut.states() {
            for (l, p1) in aut.out(p) {
                let Label::Sym(x) = l else { continue };
                let Some(Action::Push(a)) = actions.decode(x) else { continue };
                let pop = Label::Sym(actions.pop(a)?);
                for p2 in aut.eps_reach([p1]) {
                    for q in aut.successors(p2, pop) {
                        if !aut.has_transition(p, Label::Eps, q) {
                            added.push((p, q));
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (p, q) in added {
            aut.add_transition(p, Label::Eps, q)?;
        }
    }
    let closed = Language {
        aut: aut.eps_closure(),
        start: lang.start,
    };
    let cancelling: Vec<Vec<Symbol>> = actions
        .base()
        .iter()
        .map(|&a| Ok(vec![actions.push(a)?, actions.pop(a)?]))
        .collect::<Result<_>>()?;
    let pattern = pattern_forbidden_factors(closed.aut.alphabet(), &cancelling)?;
    closed.intersect(&pattern)
}

/// Removes the words with a factor `A₊B₋`, `A ≠ B`. On reduced words this
/// keeps exactly the sequences applicable to some stack.
pub fn productive_filter(lang: &Language, actions: &ActionAlphabet) -> Result<Language> {
    let lang = lang.over_actions(actions)?;
    let mut factors: Vec<Vec<Symbol>> = Vec::new();
    for &a in actions.base() {
        for &b in actions.base() {
            if a != b {
                factors.push(vec![actions.push(a)?, actions.pop(b)?]);
            }
        }
    }
    let pattern = pattern_forbidden_factors(lang.aut.alphabet(), &factors)?;
    lang.intersect(&pattern)
}

/// Splits a language of pops followed by pushes into pairs `(X, Y)` with
/// `X ⊆ Γ₋*`, `Y ⊆ Γ₊*` and `lang = ∪ X·Y`.
///
/// One pair per state reachable by pops alone from which an accepting
/// path of pushes alone starts.
pub fn decompose(lang: &Language, actions: &ActionAlphabet) -> Result<Vec<(Language, Language)>> {
    let lang = Language {
        aut: lang.over_actions(actions)?.aut.eps_closure(),
        start: lang.start,
    }
    .trim();
    let aut = &lang.aut;
    for (s, l, t) in aut.transitions() {
        let Label::Sym(x) = l else { continue };
        if !actions.is_push(x) {
            continue;
        }
        if let Some((Label::Sym(y), _)) = aut.out(t).find(|&(m, _)| matches!(m, Label::Sym(y) if actions.is_pop(y))) {
            return invalid(format!(
                "language is not of the form pops then pushes: {x} at {s} is followed by {y}"
            ));
        }
    }
    let mut pops = Nfa::with_states(aut.num_states(), actions.symbols());
    let mut pushes = pops.clone();
    for (s, l, t) in aut.transitions() {
        if let Label::Sym(x) = l {
            if actions.is_pop(x) {
                pops.add_transition(s, l, t)?;
            } else {
                pushes.add_transition(s, l, t)?;
            }
        }
    }
    for &f in aut.finals() {
        pushes.set_final(f)?;
    }
    let mut out = Vec::new();
    for q in pops.reachable([lang.start]) {
        let mut x = pops.clone();
        x.set_final(q)?;
        let x = Language { aut: x, start: lang.start }.trim();
        let y = Language {
            aut: pushes.clone(),
            start: q,
        }
        .trim();
        if !x.is_empty() && !y.is_empty() {
            out.push((x, y));
        }
    }
    Ok(out)
}
