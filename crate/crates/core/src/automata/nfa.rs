use std::collections::{BTreeSet, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::symbols::{State, Symbol};

/// Transition label: a letter or the empty word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Eps,
    Sym(Symbol),
}

/// Nondeterministic finite automaton with optional ε-transitions.
///
/// States are the dense range `0..num_states`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    num_states: usize,
    alphabet: BTreeSet<Symbol>,
    finals: BTreeSet<State>,
    transitions: BTreeSet<(State, Label, State)>,
}

impl Nfa {
    pub fn new(alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        Nfa {
            num_states: 0,
            alphabet: alphabet.into_iter().collect(),
            finals: BTreeSet::new(),
            transitions: BTreeSet::new(),
        }
    }

    pub fn with_states(num_states: usize, alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        let mut nfa = Self::new(alphabet);
        nfa.num_states = num_states;
        nfa
    }

    pub fn add_state(&mut self) -> State {
        self.num_states += 1;
        State::from(self.num_states - 1)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        (0..self.num_states).map(State::from)
    }

    pub fn has_state(&self, s: State) -> bool {
        s.index() < self.num_states
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn is_final(&self, s: State) -> bool {
        self.finals.contains(&s)
    }

    pub fn set_final(&mut self, s: State) -> Result<()> {
        self.check_state(s)?;
        self.finals.insert(s);
        Ok(())
    }

    pub fn unset_final(&mut self, s: State) {
        self.finals.remove(&s);
    }

    /// Adds a transition; returns whether it was new.
    pub fn add_transition(&mut self, from: State, label: Label, to: State) -> Result<bool> {
        self.check_state(from)?;
        self.check_state(to)?;
        if let Label::Sym(a) = label {
            self.check_symbol(a)?;
        }
        Ok(self.transitions.insert((from, label, to)))
    }

    pub fn add_symbol(&mut self, from: State, a: Symbol, to: State) -> Result<bool> {
        self.add_transition(from, Label::Sym(a), to)
    }

    pub fn remove_transition(&mut self, from: State, label: Label, to: State) -> bool {
        self.transitions.remove(&(from, label, to))
    }

    pub fn has_transition(&self, from: State, label: Label, to: State) -> bool {
        self.transitions.contains(&(from, label, to))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Label, State)> + '_ {
        self.transitions.iter().copied()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// Outgoing transitions of `s` in label order.
    pub fn out(&self, s: State) -> impl Iterator<Item = (Label, State)> + '_ {
        self.transitions
            .range((s, Label::Eps, State(0))..=(s, Label::Sym(Symbol(u32::MAX)), State(u32::MAX)))
            .map(|&(_, l, t)| (l, t))
    }

    pub fn successors(&self, s: State, label: Label) -> impl Iterator<Item = State> + '_ {
        self.transitions
            .range((s, label, State(0))..=(s, label, State(u32::MAX)))
            .map(|&(_, _, t)| t)
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|&(_, l, _)| l == Label::Eps)
    }

    pub fn check_state(&self, s: State) -> Result<()> {
        if self.has_state(s) {
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

    /// All states reachable from `from` using ε-transitions only.
    pub fn eps_reach(&self, from: impl IntoIterator<Item = State>) -> BTreeSet<State> {
        let mut seen: BTreeSet<State> = BTreeSet::new();
        let mut stack: Vec<State> = Vec::new();
        for s in from {
            if seen.insert(s) {
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for t in self.successors(s, Label::Eps) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States reachable after reading `word` from `start`, ε-moves included.
    pub fn read(&self, start: State, word: &[Symbol]) -> Result<BTreeSet<State>> {
        self.check_state(start)?;
        for &a in word {
            self.check_symbol(a)?;
        }
        let mut current = self.eps_reach([start]);
        for &a in word {
            let next: Vec<State> = current
                .iter()
                .flat_map(|&s| self.successors(s, Label::Sym(a)))
                .collect();
            current = self.eps_reach(next);
            if current.is_empty() {
                break;
            }
        }
        Ok(current)
    }

    /// Whether some run over `word` from `start` ends in a final state.
    pub fn accepts(&self, start: State, word: &[Symbol]) -> Result<bool> {
        Ok(self.read(start, word)?.iter().any(|s| self.finals.contains(s)))
    }

    /// Equivalent ε-free automaton on the same states.
    ///
    /// `s -a-> t` is added whenever `s` ε-reaches some `s'` with `s' -a-> t`,
    /// and `s` becomes final when it ε-reaches a final state. Targets of
    /// letter transitions are unchanged, so no state gains incoming edges it
    /// did not already have.
    pub fn eps_closure(&self) -> Nfa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let mut out = Nfa::with_states(self.num_states, self.alphabet.iter().copied());
        for s in self.states() {
            for r in self.eps_reach([s]) {
                if self.finals.contains(&r) {
                    out.finals.insert(s);
                }
                for (l, t) in self.out(r) {
                    if let Label::Sym(_) = l {
                        out.transitions.insert((s, l, t));
                    }
                }
            }
        }
        out
    }

    /// States reachable from any of `from`.
    pub fn reachable(&self, from: impl IntoIterator<Item = State>) -> BTreeSet<State> {
        let mut seen: BTreeSet<State> = BTreeSet::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        for s in from {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.out(s) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> BTreeSet<State> {
        let mut preds: Vec<Vec<State>> = vec![Vec::new(); self.num_states];
        for &(s, _, t) in &self.transitions {
            preds[t.index()].push(s);
        }
        let mut seen: BTreeSet<State> = self.finals.clone();
        let mut stack: Vec<State> = seen.iter().copied().collect();
        while let Some(t) = stack.pop() {
            for &s in &preds[t.index()] {
                if seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// Whether the language from `start` is empty.
    pub fn is_empty_from(&self, start: State) -> bool {
        let co = self.coreachable();
        !self.reachable([start]).iter().any(|s| co.contains(s))
    }

    /// Copy of this automaton with every letter renamed through `map`.
    pub fn relabel(
        &self,
        alphabet: impl IntoIterator<Item = Symbol>,
        map: impl Fn(Symbol) -> Symbol,
    ) -> Result<Nfa> {
        let mut out = Nfa::with_states(self.num_states, alphabet);
        out.finals = self.finals.clone();
        for &(s, l, t) in &self.transitions {
            let l = match l {
                Label::Eps => Label::Eps,
                Label::Sym(a) => Label::Sym(map(a)),
            };
            out.add_transition(s, l, t)?;
        }
        Ok(out)
    }
}

/// Synchronous product of two automata over one alphabet.
///
/// The pair `(s, t)` is state `s * right_states + t` of [`Product::nfa`].
#[derive(Debug, Clone)]
pub struct Product {
    pub nfa: Nfa,
    right_states: usize,
}

impl Product {
    pub fn pair(&self, left: State, right: State) -> State {
        State::from(left.index() * self.right_states + right.index())
    }

    pub fn components(&self, s: State) -> (State, State) {
        (
            State::from(s.index() / self.right_states),
            State::from(s.index() % self.right_states),
        )
    }
}

/// Intersection automaton: the language from `pair(s, t)` is the
/// intersection of the languages from `s` and from `t`.
pub fn product_intersect(left: &Nfa, right: &Nfa) -> Result<Product> {
    if left.alphabet != right.alphabet {
        return Err(Error::InvalidInput(
            "product of automata over different alphabets".into(),
        ));
    }
    let width = right.num_states.max(1);
    let mut nfa = Nfa::with_states(left.num_states * width, left.alphabet.iter().copied());
    let pair = |s: State, t: State| State::from(s.index() * width + t.index());
    for &s in &left.finals {
        for &t in &right.finals {
            nfa.finals.insert(pair(s, t));
        }
    }
    for &(s, l, s2) in &left.transitions {
        match l {
            Label::Eps => {
                for t in right.states() {
                    nfa.transitions.insert((pair(s, t), Label::Eps, pair(s2, t)));
                }
            }
            Label::Sym(_) => {
                for t in right.states() {
                    for t2 in right.successors(t, l) {
                        nfa.transitions.insert((pair(s, t), l, pair(s2, t2)));
                    }
                }
            }
        }
    }
    for &(t, l, t2) in &right.transitions {
        if l == Label::Eps {
            for s in left.states() {
                nfa.transitions.insert((pair(s, t), Label::Eps, pair(s, t2)));
            }
        }
    }
    Ok(Product {
        nfa,
        right_states: width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_nfa, words_up_to};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const A: Symbol = Symbol(0);
    const BOT: Symbol = Symbol(1);

    fn single_bottom() -> Nfa {
        let mut aut = Nfa::with_states(2, [A, BOT]);
        aut.add_symbol(State(0), BOT, State(1)).unwrap();
        aut.set_final(State(1)).unwrap();
        aut
    }

    /// Explores the run graph on (state, position) pairs depth first.
    fn accepts_by_runs(aut: &Nfa, start: State, w: &[Symbol]) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(start, 0usize)];
        while let Some((s, i)) = stack.pop() {
            if !seen.insert((s, i)) {
                continue;
            }
            if i == w.len() && aut.is_final(s) {
                return true;
            }
            for (l, t) in aut.out(s) {
                match l {
                    Label::Eps => stack.push((t, i)),
                    Label::Sym(a) if i < w.len() && w[i] == a => stack.push((t, i + 1)),
                    Label::Sym(_) => {}
                }
            }
        }
        false
    }

    #[test]
    fn one_step_run() {
        let aut = single_bottom();
        assert!(aut.accepts(State(0), &[BOT]).unwrap());
        assert!(!aut.accepts(State(0), &[]).unwrap());
    }

    #[test]
    fn unknown_handles_rejected() {
        let aut = single_bottom();
        assert!(aut.accepts(State(7), &[BOT]).is_err());
        assert!(aut.accepts(State(0), &[Symbol(9)]).is_err());
    }

    #[test]
    fn random_membership_matches_run_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alphabet = [Symbol(0), Symbol(1)];
        for _ in 0..60 {
            let aut = random_nfa(&mut rng, 4, &alphabet, true);
            for w in words_up_to(&alphabet, 6) {
                for s in aut.states() {
                    assert_eq!(aut.accepts(s, &w).unwrap(), accepts_by_runs(&aut, s, &w));
                }
            }
        }
    }

    #[test]
    fn closure_adds_shortcut() {
        let mut aut = Nfa::with_states(3, [A]);
        aut.add_transition(State(0), Label::Eps, State(1)).unwrap();
        aut.add_symbol(State(1), A, State(2)).unwrap();
        aut.set_final(State(2)).unwrap();
        let closed = aut.eps_closure();
        assert!(!closed.has_epsilon());
        assert!(closed.has_transition(State(0), Label::Sym(A), State(2)));
    }

    #[test]
    fn closure_of_eps_free_is_identity() {
        let aut = single_bottom();
        assert_eq!(aut.eps_closure(), aut);
    }

    #[test]
    fn closure_preserves_language() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let alphabet = [Symbol(0), Symbol(1)];
        for _ in 0..60 {
            let aut = random_nfa(&mut rng, 4, &alphabet, true);
            let closed = aut.eps_closure();
            for w in words_up_to(&alphabet, 6) {
                for s in aut.states() {
                    assert_eq!(aut.accepts(s, &w).unwrap(), closed.accepts(s, &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn product_with_universal_and_empty() {
        let aut = single_bottom();
        let mut universal = Nfa::with_states(1, [A, BOT]);
        universal.set_final(State(0)).unwrap();
        universal.add_symbol(State(0), A, State(0)).unwrap();
        universal.add_symbol(State(0), BOT, State(0)).unwrap();
        let empty = Nfa::with_states(1, [A, BOT]);
        let p = product_intersect(&aut, &universal).unwrap();
        let q = product_intersect(&aut, &empty).unwrap();
        for w in words_up_to(&[A, BOT], 4) {
            assert_eq!(
                p.nfa.accepts(p.pair(State(0), State(0)), &w).unwrap(),
                aut.accepts(State(0), &w).unwrap()
            );
            assert!(!q.nfa.accepts(q.pair(State(0), State(0)), &w).unwrap());
        }
    }

    #[test]
    fn product_alphabet_mismatch() {
        let a = Nfa::with_states(1, [A]);
        let b = Nfa::with_states(1, [BOT]);
        assert!(product_intersect(&a, &b).is_err());
    }

    #[test]
    fn random_product_is_conjunction() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let alphabet = [Symbol(0), Symbol(1)];
        for _ in 0..40 {
            let l = random_nfa(&mut rng, 4, &alphabet, true);
            let r = random_nfa(&mut rng, 4, &alphabet, true);
            let p = product_intersect(&l, &r).unwrap();
            for w in words_up_to(&alphabet, 6) {
                for s in l.states() {
                    for t in r.states() {
                        assert_eq!(
                            p.nfa.accepts(p.pair(s, t), &w).unwrap(),
                            l.accepts(s, &w).unwrap() && r.accepts(t, &w).unwrap()
                        );
                    }
                }
            }
        }
    }
}
