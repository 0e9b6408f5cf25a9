use std::collections::BTreeSet;

use crate::derivation::actions::{Action, ActionAlphabet};
use crate::derivation::pipeline::{behaviour_automaton, benois_reduce, decompose, productive_filter, Language};
use crate::error::Result;
use crate::pds::PushdownSystem;
use crate::symbols::{Control, Symbol};
#[cfg(test)]
use crate::symbols::State;

/// Union of prefix rewritings `u·w -> v·w` with `(u, v) ∈ U × V` for one of
/// the pairs `(U, V)`.
#[derive(Debug, Clone)]
pub struct PrefixRewriteRelation {
    alphabet: BTreeSet<Symbol>,
    pairs: Vec<(Language, Language)>,
}

impl PrefixRewriteRelation {
    pub fn new(alphabet: impl IntoIterator<Item = Symbol>, pairs: Vec<(Language, Language)>) -> Self {
        PrefixRewriteRelation {
            alphabet: alphabet.into_iter().collect(),
            pairs,
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[(Language, Language)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, w1: &[Symbol], w2: &[Symbol]) -> bool {
        self.pairs.iter().any(|(u, v)| {
            (0..=w1.len()).any(|k| {
                let rest = &w1[k..];
                w2.len() >= rest.len()
                    && w2.ends_with(rest)
                    && u.accepts(&w1[..k])
                    && v.accepts(&w2[..w2.len() - rest.len()])
            })
        })
    }
}

/// The pairs of stack contents `(w1, w2)` such that `(q0, w1)` derives
/// `(qf, w2)`. The system must not have rules reading or pushing bottom.
pub fn deriv_relation(pds: &PushdownSystem, q0: Control, qf: Control) -> Result<PrefixRewriteRelation> {
    let actions = ActionAlphabet::for_system(pds);
    let behaviour = behaviour_automaton(pds, q0, qf)?;
    let reduced = benois_reduce(&behaviour, &actions)?;
    let productive = productive_filter(&reduced, &actions)?;
    let base: Vec<Symbol> = actions.base().to_vec();
    let strip = |x: Symbol| match actions.decode(x) {
        Some(Action::Push(a) | Action::Pop(a)) => a,
        None => x,
    };
    let mut pairs = Vec::new();
    for (x, y) in decompose(&productive, &actions)? {
        let u = Language::new(x.aut.relabel(base.iter().copied(), strip)?, x.start)?;
        let v = Language::new(y.aut.relabel(base.iter().copied(), strip)?, y.start)?.reversed();
        pairs.push((u, v));
    }
    Ok(PrefixRewriteRelation::new(base, pairs))
}

pub fn deriv_member(rel: &PrefixRewriteRelation, w1: &[Symbol], w2: &[Symbol]) -> bool {
    rel.contains(w1, w2)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::automata::Word;
    use crate::derivation::{apply_actions, reduce_sequence};
    use crate::pds::Configuration;
    use crate::reachability::{poststar, PAutomaton};
    use crate::sample::{random_bottom_free_pds, random_nfa, words_up_to};

    fn pop_system() -> PushdownSystem {
        let mut pds = PushdownSystem::from_names(&["p", "q"], &["A", "B", "_"], "_").unwrap();
        pds.add_rule_named("p", "A", "q", &[]).unwrap();
        pds
    }

    #[test]
    fn single_pop() {
        let pds = pop_system();
        let (p, q) = (pds.control("p").unwrap(), pds.control("q").unwrap());
        let (a, b) = (pds.symbol("A").unwrap(), pds.symbol("B").unwrap());
        let rel = deriv_relation(&pds, p, q).unwrap();
        assert!(rel.contains(&[a, b], &[b]));
        assert!(rel.contains(&[a], &[]));
        assert!(!rel.contains(&[b], &[]));
        assert!(!rel.contains(&[a, b], &[a, b]));
        let id = deriv_relation(&pds, q, q).unwrap();
        assert!(id.contains(&[a, b], &[a, b]));
        assert!(!id.contains(&[a, b], &[b]));
    }

    #[test]
    fn bottom_rules_rejected() {
        let mut pds = pop_system();
        pds.add_rule_named("p", "_", "q", &["_"]).unwrap();
        let (p, q) = (pds.control("p").unwrap(), pds.control("q").unwrap());
        assert!(deriv_relation(&pds, p, q).is_err());
    }

    #[test]
    fn non_productive_sequence_dropped() {
        let act = ActionAlphabet::new([Symbol(0), Symbol(1), Symbol(2)]);
        let (b, c) = (Symbol(1), Symbol(2));
        let mut aut = crate::automata::Nfa::with_states(3, act.symbols());
        aut.add_symbol(State(0), act.push(b).unwrap(), State(1)).unwrap();
        aut.add_symbol(State(1), act.pop(c).unwrap(), State(2)).unwrap();
        aut.set_final(State(2)).unwrap();
        let lang = Language::new(aut, State(0)).unwrap();
        let red = benois_reduce(&lang, &act).unwrap();
        assert!(red.accepts(&[act.push(b).unwrap(), act.pop(c).unwrap()]));
        assert!(productive_filter(&red, &act).unwrap().is_empty());
    }

    /// Words of `lang` up to `len`, by enumeration.
    fn words_of(lang: &Language, letters: &[Symbol], len: usize) -> Vec<Word> {
        words_up_to(letters, len)
            .into_iter()
            .filter(|w| lang.accepts(w))
            .collect()
    }

    #[test]
    fn benois_matches_bounded_height_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let act = ActionAlphabet::new([Symbol(0), Symbol(1)]);
        let letters = act.symbols();
        for _ in 0..150 {
            let states = rng.gen_range(1..=4);
            let aut = random_nfa(&mut rng, states, &letters, true);
            let lang = Language::new(aut, State(0)).unwrap();
            let red = benois_reduce(&lang, &act).unwrap();
            // Every reduced word of a short word is accepted.
            for alpha in words_of(&lang, &letters, 6) {
                assert!(red.accepts(&reduce_sequence(&act, &alpha)));
            }
            let images = reduced_images(&lang, &act, 6);
            for beta in words_of(&red, &letters, 3) {
                assert_eq!(reduce_sequence(&act, &beta), beta);
                assert!(images.contains(&beta), "{beta:?} has no witness");
            }
            for beta in images.iter().filter(|b| b.len() <= 3) {
                assert!(red.accepts(beta), "{beta:?} missing");
            }
        }
    }

    /// Reduced forms of the words of `lang` whose running reduction never
    /// grows beyond `cap` letters. Word length is unbounded.
    fn reduced_images(lang: &Language, act: &ActionAlphabet, cap: usize) -> BTreeSet<Word> {
        let mut seen: BTreeSet<(State, Word)> = BTreeSet::new();
        let mut stack = vec![(lang.start, Word::new())];
        while let Some(node) = stack.pop() {
            if !seen.insert(node.clone()) {
                continue;
            }
            let (s, w) = node;
            for (l, t) in lang.aut.out(s) {
                let next = match l {
                    crate::automata::Label::Eps => w.clone(),
                    crate::automata::Label::Sym(x) => {
                        let mut v = w.clone();
                        v.push(x);
                        reduce_sequence(act, &v)
                    }
                };
                if next.len() <= cap {
                    stack.push((t, next));
                }
            }
        }
        seen.into_iter()
            .filter(|(s, _)| lang.aut.is_final(*s))
            .map(|(_, w)| w)
            .collect()
    }

    #[test]
    fn decompose_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let act = ActionAlphabet::new([Symbol(0), Symbol(1)]);
        let letters = act.symbols();
        for _ in 0..100 {
            let states = rng.gen_range(1..=4);
            let aut = random_nfa(&mut rng, states, &letters, true);
            let lang = Language::new(aut, State(0)).unwrap();
            let rp = productive_filter(&benois_reduce(&lang, &act).unwrap(), &act).unwrap();
            let pairs = decompose(&rp, &act).unwrap();
            for w in words_up_to(&letters, 5) {
                let split = (0..=w.len()).any(|k| {
                    pairs
                        .iter()
                        .any(|(x, y)| x.accepts(&w[..k]) && y.accepts(&w[k..]))
                });
                assert_eq!(rp.accepts(&w), split, "{w:?}");
            }
            for (x, y) in &pairs {
                for w in words_of(x, &letters, 3) {
                    assert!(w.iter().all(|&a| act.is_pop(a)));
                }
                for w in words_of(y, &letters, 3) {
                    assert!(w.iter().all(|&a| act.is_push(a)));
                }
            }
        }
    }

    #[test]
    fn decompose_rejects_push_then_pop() {
        let act = ActionAlphabet::new([Symbol(0)]);
        let mut aut = crate::automata::Nfa::with_states(3, act.symbols());
        aut.add_symbol(State(0), act.push(Symbol(0)).unwrap(), State(1)).unwrap();
        aut.add_symbol(State(1), act.pop(Symbol(0)).unwrap(), State(2)).unwrap();
        aut.set_final(State(2)).unwrap();
        let lang = Language::new(aut, State(0)).unwrap();
        assert!(decompose(&lang, &act).is_err());
    }

    #[test]
    fn productive_words_act_on_some_stack() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let act = ActionAlphabet::new([Symbol(0), Symbol(1)]);
        let letters = act.symbols();
        let stacks = words_up_to(act.base(), 4);
        for _ in 0..60 {
            let states = rng.gen_range(1..=4);
            let aut = random_nfa(&mut rng, states, &letters, false);
            let lang = Language::new(aut, State(0)).unwrap();
            let red = benois_reduce(&lang, &act).unwrap();
            let rp = productive_filter(&red, &act).unwrap();
            for beta in words_of(&red, &letters, 4) {
                let applicable = stacks.iter().any(|u| apply_actions(&act, u, &beta).is_some());
                assert_eq!(rp.accepts(&beta), applicable, "{beta:?}");
            }
        }
    }

    #[test]
    fn matches_poststar() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..40 {
            let pds = random_bottom_free_pds(&mut rng, 2, 2, 5);
            let letters: Vec<Symbol> = pds.stack_symbols().collect();
            let words = words_up_to(&letters, 3);
            for q0 in pds.controls() {
                for qf in pds.controls() {
                    let rel = deriv_relation(&pds, q0, qf).unwrap();
                    for w1 in &words {
                        let mut stack = w1.clone();
                        stack.push(pds.bottom());
                        let start = Configuration::new(q0, stack);
                        let post = poststar(&pds, &PAutomaton::from_configurations(&pds, [&start]).unwrap()).unwrap();
                        for w2 in &words {
                            let mut stack = w2.clone();
                            stack.push(pds.bottom());
                            let reached = post.accepts(&Configuration::new(qf, stack)).unwrap();
                            assert_eq!(rel.contains(w1, w2), reached, "{w1:?} -> {w2:?}");
                        }
                    }
                }
            }
        }
    }
}
