use std::collections::{HashMap, HashSet, VecDeque};

use crate::automata::{Label, Nfa};
use crate::error::{invalid, Result};
use crate::pds::PushdownSystem;
use crate::symbols::{Control, State, Symbol};

use super::PAutomaton;

type Head = (Control, Symbol);

/// Bookkeeping of one saturation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Saturation {
    /// Transitions added on top of the ε-closed input, in insertion order.
    pub added: Vec<(State, Symbol, State)>,
}

/// `pre*` of the configurations accepted by `a`.
pub fn prestar(pds: &PushdownSystem, a: &PAutomaton) -> Result<PAutomaton> {
    prestar_traced(pds, a).map(|(out, _)| out)
}

/// [`prestar`] that also reports every transition it added.
pub fn prestar_traced(pds: &PushdownSystem, a: &PAutomaton) -> Result<(PAutomaton, Saturation)> {
    check_input(pds, a)?;
    let closed = a.nfa().eps_closure();
    let embed = a.embed();
    let control_of: HashMap<State, Control> = embed
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, Control::from(i)))
        .collect();

    // rules indexed by the head of their right-hand side
    let mut swaps: HashMap<Head, Vec<Head>> = HashMap::new();
    let mut pushes: HashMap<Head, Vec<(Control, Symbol, Symbol)>> = HashMap::new();
    let mut work: VecDeque<(State, Symbol, State)> = VecDeque::new();
    for (from, label, to) in closed.transitions() {
        if let Label::Sym(x) = label {
            work.push_back((from, x, to));
        }
    }
    let initial: HashSet<(State, Symbol, State)> = work.iter().copied().collect();
    for r in pds.rules() {
        match r.push.as_slice() {
            [] => work.push_back((embed[r.from.index()], r.symbol, embed[r.to.index()])),
            [b] => swaps.entry((r.to, *b)).or_default().push((r.from, r.symbol)),
            [b, c] => pushes.entry((r.to, *b)).or_default().push((r.from, r.symbol, *c)),
            _ => unreachable!("validated"),
        }
    }

    // derived rules (p,A) -> (s,C) where s is any automaton state
    let mut derived: HashMap<(State, Symbol), Vec<(Control, Symbol)>> = HashMap::new();
    let mut derived_seen: HashSet<(Control, Symbol, State, Symbol)> = HashSet::new();
    let mut rel: HashSet<(State, Symbol, State)> = HashSet::new();
    let mut out: HashMap<(State, Symbol), Vec<State>> = HashMap::new();
    let mut trace = Saturation::default();

    while let Some(t @ (s, x, target)) = work.pop_front() {
        if !rel.insert(t) {
            continue;
        }
        out.entry((s, x)).or_default().push(target);
        if !initial.contains(&t) {
            trace.added.push(t);
        }
        if let Some(&q) = control_of.get(&s) {
            if let Some(lhs) = swaps.get(&(q, x)) {
                for &(p, a) in lhs {
                    work.push_back((embed[p.index()], a, target));
                }
            }
            if let Some(lhs) = pushes.get(&(q, x)) {
                for &(p, a, c) in lhs {
                    if !derived_seen.insert((p, a, target, c)) {
                        continue;
                    }
                    derived.entry((target, c)).or_default().push((p, a));
                    if let Some(next) = out.get(&(target, c)) {
                        for &u in next {
                            work.push_back((embed[p.index()], a, u));
                        }
                    }
                }
            }
        }
        if let Some(lhs) = derived.get(&(s, x)) {
            for &(p, a) in lhs {
                work.push_back((embed[p.index()], a, target));
            }
        }
    }

    let mut nfa = Nfa::with_states(closed.num_states(), pds.symbols());
    for &f in closed.finals() {
        nfa.set_final(f)?;
    }
    let mut sorted: Vec<_> = rel.into_iter().collect();
    sorted.sort();
    for (s, x, t) in sorted {
        nfa.add_symbol(s, x, t)?;
    }
    Ok((PAutomaton::from_parts(nfa, embed.to_vec()), trace))
}

/// `post*` of the configurations accepted by `a`, computed as `pre*` in the
/// inverted system and viewed on the original controls only.
pub fn poststar(pds: &PushdownSystem, a: &PAutomaton) -> Result<PAutomaton> {
    check_input(pds, a)?;
    let inverse = pds.invert();
    let mut extended = a.clone();
    extended.extend_controls(inverse.num_controls());
    let mut out = prestar(&inverse, &extended)?;
    out.restrict_controls(pds.num_controls());
    Ok(out)
}

fn check_input(pds: &PushdownSystem, a: &PAutomaton) -> Result<()> {
    pds.check()?;
    if a.num_controls() != pds.num_controls() {
        return invalid(format!(
            "automaton embeds {} controls, system has {}",
            a.num_controls(),
            pds.num_controls()
        ));
    }
    if let Some(x) = a
        .nfa()
        .alphabet()
        .iter()
        .find(|x| !pds.symbol_table().contains(x.0))
    {
        return invalid(format!("automaton symbol {x} is not a stack symbol"));
    }
    a.check_invariants()
}
