use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automata::Nfa;
use crate::error::Result;
use crate::pds::PushdownSystem;
use crate::symbols::{Control, State, Symbol};

use super::PAutomaton;

/// Triples `(p, A, q)` with `pA =>* q`: the top symbol `A` is consumed and
/// the system ends in control `q`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopRelation {
    triples: BTreeSet<(Control, Symbol, Control)>,
}

impl PopRelation {
    pub fn contains(&self, p: Control, a: Symbol, q: Control) -> bool {
        self.triples.contains(&(p, a, q))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Control, Symbol, Control)> + '_ {
        self.triples.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Least relation containing the pop rules and closed under going through a
/// swap, or through a push whose two symbols are popped in turn.
pub fn pop_relation(pds: &PushdownSystem) -> PopRelation {
    let mut swaps: BTreeMap<Head, Vec<Head>> = BTreeMap::new();
    // pushes by first pushed symbol, and by second pushed symbol
    let mut by_first: BTreeMap<Head, Vec<(Control, Symbol, Symbol)>> = BTreeMap::new();
    let mut by_second: BTreeMap<Symbol, Vec<(Control, Symbol, Control, Symbol)>> = BTreeMap::new();
    let mut work = VecDeque::new();
    for r in pds.rules() {
        match r.push.as_slice() {
            [] => work.push_back((r.from, r.symbol, r.to)),
            [b] => swaps.entry((r.to, *b)).or_default().push((r.from, r.symbol)),
            [b, c] => {
                by_first.entry((r.to, *b)).or_default().push((r.from, r.symbol, *c));
                by_second.entry(*c).or_default().push((r.from, r.symbol, r.to, *b));
            }
            _ => {}
        }
    }
    let mut rel = PopRelation::default();
    let mut out: BTreeMap<(Control, Symbol), BTreeSet<Control>> = BTreeMap::new();
    while let Some(t @ (r, b, q)) = work.pop_front() {
        if !rel.triples.insert(t) {
            continue;
        }
        out.entry((r, b)).or_default().insert(q);
        for &(p, a) in swaps.get(&(r, b)).into_iter().flatten() {
            work.push_back((p, a, q));
        }
        // t as the first half of a push
        for &(p, a, c) in by_first.get(&(r, b)).into_iter().flatten() {
            for &u in out.get(&(q, c)).into_iter().flatten() {
                work.push_back((p, a, u));
            }
        }
        // t as the second half: need (r', B', r) already present
        for &(p, a, r2, b2) in by_second.get(&b).into_iter().flatten() {
            if rel.triples.contains(&(r2, b2, r)) {
                work.push_back((p, a, q));
            }
        }
    }
    rel
}

type Head = (Control, Symbol);

/// Pairs `(pA, qB)` with `pA =>* qB` without consuming below `A`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewRelation {
    pairs: BTreeSet<(Head, Head)>,
    rounds: usize,
}

impl RewRelation {
    pub fn contains(&self, from: Head, to: Head) -> bool {
        self.pairs.contains(&(from, to))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Head, Head)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of rounds after the initial approximation until stabilisation.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// `pA =>* q` iff `pA =>* rB` and `rB -> q` is a pop rule.
    pub fn pops(&self, pds: &PushdownSystem) -> PopRelation {
        let pops = pop_rules(pds);
        let mut rel = PopRelation::default();
        for &(from, (r, b)) in &self.pairs {
            for &q in pops.get(&(r, b)).into_iter().flatten() {
                rel.triples.insert((from.0, from.1, q));
            }
        }
        rel
    }
}

fn pop_rules(pds: &PushdownSystem) -> BTreeMap<Head, Vec<Control>> {
    let mut pops: BTreeMap<Head, Vec<Control>> = BTreeMap::new();
    for r in pds.rules().filter(|r| r.push.is_empty()) {
        pops.entry((r.from, r.symbol)).or_default().push(r.to);
    }
    pops
}

/// The `Rew` relation as the limit of its increasing approximations: start
/// from reflexivity and the swap rules, then close under transitivity and
/// push-then-pop excursions one round at a time.
pub fn rew_closure(pds: &PushdownSystem) -> RewRelation {
    let mut pairs: BTreeSet<(Head, Head)> = BTreeSet::new();
    for p in pds.controls() {
        for a in pds.symbols() {
            pairs.insert(((p, a), (p, a)));
        }
    }
    for r in pds.rules() {
        if let [b] = r.push.as_slice() {
            pairs.insert(((r.from, r.symbol), (r.to, *b)));
        }
    }
    let pops = pop_rules(pds);
    let pushes: Vec<_> = pds
        .rules()
        .filter_map(|r| match r.push.as_slice() {
            [b, c] => Some(((r.from, r.symbol), (r.to, *b), *c)),
            _ => None,
        })
        .collect();
    let mut rounds = 0;
    loop {
        let mut succ: BTreeMap<Head, Vec<Head>> = BTreeMap::new();
        for &(x, y) in &pairs {
            succ.entry(x).or_default().push(y);
        }
        let mut fresh = Vec::new();
        for &(x, y) in &pairs {
            for &z in succ.get(&y).into_iter().flatten() {
                if !pairs.contains(&(x, z)) {
                    fresh.push((x, z));
                }
            }
        }
        for &(head, inner, c) in &pushes {
            for &(t, d) in succ.get(&inner).into_iter().flatten() {
                for &q in pops.get(&(t, d)).into_iter().flatten() {
                    if !pairs.contains(&(head, (q, c))) {
                        fresh.push((head, (q, c)));
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        pairs.extend(fresh);
        rounds += 1;
    }
    RewRelation { pairs, rounds }
}

/// Controls `p` with `(p, ⊥) =>* (q_f, ⊥)`: least set containing `q_f` and
/// closed under bottom swaps and bottom pushes whose symbol is later popped.
fn bottom_reach(pds: &PushdownSystem, qf: Control, pops: &PopRelation) -> BTreeSet<Control> {
    let bottom = pds.bottom();
    let mut reach = BTreeSet::from([qf]);
    loop {
        let mut changed = false;
        for r in pds.rules().filter(|r| r.symbol == bottom) {
            if reach.contains(&r.from) {
                continue;
            }
            let hit = match r.push.as_slice() {
                [_] => reach.contains(&r.to),
                [a, _] => reach.iter().any(|&s| pops.contains(r.to, *a, s)),
                _ => false,
            };
            if hit {
                reach.insert(r.from);
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// P-automaton for `pre*{(q_f, ⊥)}` built from `Rew` rather than by
/// saturation: states are the controls plus a final state `s⊥`, with
/// `p -A-> q` for every pop `pA =>* q` and `p -⊥-> s⊥` whenever
/// `(p, ⊥) =>* (q_f, ⊥)`.
pub fn buchi_target_automaton(pds: &PushdownSystem, qf: Control) -> Result<PAutomaton> {
    pds.check()?;
    if !pds.control_table().contains(qf.0) {
        return crate::error::invalid(format!("unknown control {qf}"));
    }
    let n = pds.num_controls();
    let pops = rew_closure(pds).pops(pds);
    let mut nfa = Nfa::with_states(n + 1, pds.symbols());
    let sink = State::from(n);
    nfa.set_final(sink)?;
    for (p, a, q) in pops.iter() {
        nfa.add_symbol(State(p.0), a, State(q.0))?;
    }
    for p in bottom_reach(pds, qf, &pops) {
        nfa.add_symbol(State(p.0), pds.bottom(), sink)?;
    }
    let embed = (0..n).map(State::from).collect();
    Ok(PAutomaton::from_parts(nfa, embed))
}
