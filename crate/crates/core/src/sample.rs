//! Seeded random instances and small exhaustive enumerations, shared by unit
//! tests, integration tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use std::collections::BTreeSet;

use crate::automata::{AltAutomaton, Label, Nfa, StateSet, Word};
use crate::games::{Player, PushdownGame, ReachTarget, WinningCondition};
use crate::pds::{PushdownSystem, Rule};
use crate::reachability::PAutomaton;
use crate::symbols::{Control, State, Symbol};

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &a in alphabet {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Valid stacks of height at most `h`, the bottom symbol counted.
pub fn stacks_up_to(pds: &PushdownSystem, h: usize) -> Vec<Word> {
    if h == 0 {
        return Vec::new();
    }
    let letters: Vec<Symbol> = pds.stack_symbols().collect();
    words_up_to(&letters, h - 1)
        .into_iter()
        .map(|mut w| {
            w.push(pds.bottom());
            w
        })
        .collect()
}

pub fn random_nfa<R: Rng>(rng: &mut R, states: usize, alphabet: &[Symbol], eps: bool) -> Nfa {
    let mut aut = Nfa::with_states(states, alphabet.iter().copied());
    let count = rng.gen_range(0..=states * (alphabet.len() + 1));
    for _ in 0..count {
        let from = State::from(rng.gen_range(0..states));
        let to = State::from(rng.gen_range(0..states));
        let label = if eps && rng.gen_bool(0.2) {
            Label::Eps
        } else {
            Label::Sym(*alphabet.choose(rng).expect("nonempty alphabet"))
        };
        aut.add_transition(from, label, to).expect("valid handles");
    }
    for s in 0..states {
        if rng.gen_bool(0.35) {
            aut.set_final(State::from(s)).expect("valid state");
        }
    }
    aut
}

pub fn random_alt<R: Rng>(rng: &mut R, states: usize, alphabet: &[Symbol]) -> AltAutomaton {
    let mut aut = AltAutomaton::new(alphabet.iter().copied());
    for s in 0..states {
        aut.add_state(State::from(s));
    }
    let count = rng.gen_range(0..=states * alphabet.len() * 2);
    for _ in 0..count {
        let from = State::from(rng.gen_range(0..states));
        let a = *alphabet.choose(rng).expect("nonempty alphabet");
        let size = rng.gen_range(1..=states.min(3));
        let target: StateSet = (0..size).map(|_| State::from(rng.gen_range(0..states))).collect();
        aut.add_transition(from, a, target).expect("valid handles");
    }
    for s in 0..states {
        if rng.gen_bool(0.4) {
            aut.set_final(State::from(s)).expect("valid state");
        }
    }
    aut
}

/// Control names `p0, p1, ...`, stack symbols `A, B, ...` and bottom `_`.
pub fn empty_system(controls: usize, symbols: usize) -> PushdownSystem {
    let cnames: Vec<String> = (0..controls).map(|i| format!("p{i}")).collect();
    let mut snames: Vec<String> = (0..symbols).map(symbol_name).collect();
    snames.push("_".to_string());
    let c: Vec<&str> = cnames.iter().map(String::as_str).collect();
    let s: Vec<&str> = snames.iter().map(String::as_str).collect();
    PushdownSystem::from_names(&c, &s, "_").expect("distinct generated names")
}

fn symbol_name(i: usize) -> String {
    let base = char::from(b'A' + (i % 26) as u8);
    if i < 26 {
        base.to_string()
    } else {
        format!("{base}{}", i / 26)
    }
}

/// A random valid rule; with `bottom` false the rule never reads the bottom.
pub fn random_rule<R: Rng>(rng: &mut R, pds: &PushdownSystem, bottom: bool) -> Rule {
    let letters: Vec<Symbol> = pds.stack_symbols().collect();
    let from = Control::from(rng.gen_range(0..pds.num_controls()));
    let to = Control::from(rng.gen_range(0..pds.num_controls()));
    let pick = |rng: &mut R| *letters.choose(rng).expect("nonempty alphabet");
    if bottom && rng.gen_bool(0.25) {
        let push = if rng.gen_bool(0.5) {
            vec![pds.bottom()]
        } else {
            vec![pick(rng), pds.bottom()]
        };
        return Rule::new(from, pds.bottom(), to, push);
    }
    let symbol = pick(rng);
    let push = match rng.gen_range(0..3) {
        0 => vec![],
        1 => vec![pick(rng)],
        _ => vec![pick(rng), pick(rng)],
    };
    Rule::new(from, symbol, to, push)
}

/// A random valid rule with left-hand side `(from, symbol)`.
pub fn random_rule_from<R: Rng>(rng: &mut R, pds: &PushdownSystem, from: Control, symbol: Symbol) -> Rule {
    let letters: Vec<Symbol> = pds.stack_symbols().collect();
    let to = Control::from(rng.gen_range(0..pds.num_controls()));
    let pick = |rng: &mut R| *letters.choose(rng).expect("nonempty alphabet");
    let push = if symbol == pds.bottom() {
        if rng.gen_bool(0.5) {
            vec![pds.bottom()]
        } else {
            vec![pick(rng), pds.bottom()]
        }
    } else {
        match rng.gen_range(0..3) {
            0 => vec![],
            1 => vec![pick(rng)],
            _ => vec![pick(rng), pick(rng)],
        }
    };
    Rule::new(from, symbol, to, push)
}

/// Adds a random rule for every `(q, A)` that has none.
pub fn make_total<R: Rng>(rng: &mut R, pds: &mut PushdownSystem) {
    let heads: Vec<(Control, Symbol)> = pds
        .controls()
        .flat_map(|p| pds.symbols().map(move |a| (p, a)))
        .collect();
    for (p, a) in heads {
        if pds.rules_from(p, a).next().is_none() {
            let rule = random_rule_from(rng, pds, p, a);
            pds.add_rule(rule);
        }
    }
}

/// Between one and `max_rules` random rules over `controls` controls and
/// `symbols` non-bottom stack symbols.
pub fn random_pds<R: Rng>(rng: &mut R, controls: usize, symbols: usize, max_rules: usize) -> PushdownSystem {
    let mut pds = empty_system(controls, symbols);
    let n = rng.gen_range(1..=max_rules.max(1));
    for _ in 0..n {
        let rule = random_rule(rng, &pds, true);
        pds.add_rule(rule);
    }
    pds
}

/// As [`random_pds`] but no rule reads or writes the bottom symbol.
pub fn random_bottom_free_pds<R: Rng>(
    rng: &mut R,
    controls: usize,
    symbols: usize,
    max_rules: usize,
) -> PushdownSystem {
    let mut pds = empty_system(controls, symbols);
    let n = rng.gen_range(1..=max_rules.max(1));
    for _ in 0..n {
        let rule = random_rule(rng, &pds, false);
        pds.add_rule(rule);
    }
    pds
}

/// A target set of configurations given by a random automaton whose entry
/// states have no incoming transitions.
pub fn random_target<R: Rng>(rng: &mut R, pds: &PushdownSystem, extra: usize) -> PAutomaton {
    let n = pds.num_controls();
    let mut nfa = Nfa::with_states(n + extra, pds.symbols());
    let symbols: Vec<Symbol> = pds.symbols().collect();
    let count = rng.gen_range(1..=(n + extra) * 2);
    for _ in 0..count {
        let from = State::from(rng.gen_range(0..n + extra));
        let to = State::from(n + rng.gen_range(0..extra));
        let a = *symbols.choose(rng).expect("nonempty alphabet");
        nfa.add_symbol(from, a, to).expect("valid handles");
    }
    for s in n..n + extra {
        if rng.gen_bool(0.5) {
            nfa.set_final(State::from(s)).expect("valid state");
        }
    }
    PAutomaton::new(nfa, (0..n).map(State::from).collect()).expect("distinct entries")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Reachability,
    Buchi,
    Parity,
}

fn random_owners<R: Rng>(rng: &mut R) -> Vec<Player> {
    let e = rng.gen_range(1..=2);
    let a = rng.gen_range(1..=2);
    let mut owners = vec![Player::Eloise; e];
    owners.extend(std::iter::repeat_n(Player::Abelard, a));
    owners
}

fn random_condition<R: Rng>(rng: &mut R, pds: &PushdownSystem, kind: GameKind) -> WinningCondition {
    match kind {
        GameKind::Reachability => {
            let t = random_target(rng, pds, 2);
            WinningCondition::Reachability(ReachTarget::from_pautomaton(&t).expect("entries not entered"))
        }
        GameKind::Buchi => {
            let f: BTreeSet<Control> = pds.controls().filter(|_| rng.gen_bool(0.5)).collect();
            WinningCondition::Buchi(f)
        }
        GameKind::Parity => WinningCondition::Parity(pds.controls().map(|_| rng.gen_range(0..=3)).collect()),
    }
}

/// Up to two controls per player, up to three stack symbols, up to six
/// random rules, then padded with random rules until every `(q, A)` has
/// one. Parity colours range over `0..=3`.
pub fn random_game<R: Rng>(rng: &mut R, kind: GameKind) -> PushdownGame {
    let owners = random_owners(rng);
    let symbols = rng.gen_range(1..=3);
    let mut pds = empty_system(owners.len(), symbols);
    let n = rng.gen_range(1..=6);
    for _ in 0..n {
        let rule = random_rule(rng, &pds, true);
        pds.add_rule(rule);
    }
    make_total(rng, &mut pds);
    let condition = random_condition(rng, &pds, kind);
    PushdownGame::new(pds, owners, condition).expect("generated game is valid")
}

/// A total random parity game none of whose rules grows the stack.
pub fn random_game_without_push<R: Rng>(rng: &mut R) -> PushdownGame {
    let owners = random_owners(rng);
    let symbols = rng.gen_range(1..=3);
    let mut pds = empty_system(owners.len(), symbols);
    let letters: Vec<Symbol> = pds.stack_symbols().collect();
    for p in pds.controls().collect::<Vec<_>>() {
        for a in pds.symbols().collect::<Vec<_>>() {
            for _ in 0..rng.gen_range(1..=2) {
                let to = Control::from(rng.gen_range(0..pds.num_controls()));
                let push = if a == pds.bottom() {
                    vec![a]
                } else if rng.gen_bool(0.5) {
                    vec![]
                } else {
                    vec![*letters.choose(rng).expect("nonempty alphabet")]
                };
                pds.add_rule(Rule::new(p, a, to, push));
            }
        }
    }
    let condition = random_condition(rng, &pds, GameKind::Parity);
    PushdownGame::new(pds, owners, condition).expect("generated game is valid")
}
