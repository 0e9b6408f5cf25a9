//! Text and DOT output.
//!
//! Text output is a complete document (the `pds` block followed by an
//! `automaton` block) so results can be fed back in. Entry states are named
//! after their control state.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write;

use pdsat::automata::{Label, StateSet};
use pdsat::derivation::{Language, PrefixRewriteRelation};
use pdsat::games::RegionAutomaton;
use pdsat::pds::PushdownSystem;
use pdsat::reachability::PAutomaton;
use pdsat::State;

use crate::doc::{serialize, Block, BlockKind, InputDocument, Line, LineKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Dot,
}

/// An automaton with every state named, ready for output.
struct View {
    names: BTreeMap<State, String>,
    entries: BTreeSet<State>,
    finals: BTreeSet<State>,
    edges: Vec<(State, String, StateSet)>,
}

/// Names entry states after their controls and the others through
/// `fallback`, adding primes on clashes.
fn name_states(
    pds: &PushdownSystem,
    entries: &[State],
    states: impl IntoIterator<Item = State>,
    fallback: impl Fn(State) -> String,
) -> BTreeMap<State, String> {
    let mut names = BTreeMap::new();
    let mut used: HashSet<String> = HashSet::new();
    for (c, &s) in pds.controls().zip(entries) {
        let n = pds.control_name(c).to_string();
        used.insert(n.clone());
        names.insert(s, n);
    }
    for s in states {
        if names.contains_key(&s) {
            continue;
        }
        let mut n = fallback(s);
        while !used.insert(n.clone()) {
            n.push('\'');
        }
        names.insert(s, n);
    }
    names
}

fn pautomaton_view(pds: &PushdownSystem, a: &PAutomaton) -> View {
    let nfa = a.nfa().eps_closure();
    let entries: Vec<State> = pds.controls().map(|c| a.embed()[c.index()]).collect();
    let names = name_states(pds, &entries, nfa.states(), |s| format!("s{}", s.0));
    let edges = nfa
        .transitions()
        .filter_map(|(s, l, t)| match l {
            Label::Sym(x) => Some((s, pds.symbol_name(x).to_string(), StateSet::singleton(t))),
            Label::Eps => None,
        })
        .collect();
    View {
        names,
        entries: entries.into_iter().collect(),
        finals: nfa.finals().clone(),
        edges,
    }
}

fn region_view(pds: &PushdownSystem, r: &RegionAutomaton) -> View {
    let entries: Vec<State> = pds.controls().map(|c| r.entry(c).expect("every control has an entry")).collect();
    let aut = r.aut();
    let names = name_states(pds, &entries, aut.states().iter().copied(), |s| r.state_name(pds, s));
    let edges = aut
        .transitions()
        .map(|(s, x, t)| (s, pds.symbol_name(x).to_string(), t.clone()))
        .collect();
    View {
        names,
        entries: entries.into_iter().collect(),
        finals: aut.finals().clone(),
        edges,
    }
}

pub fn pds_block(pds: &PushdownSystem) -> Block {
    let mut lines = vec![
        LineKind::States(pds.controls().map(|c| pds.control_name(c).to_string()).collect()),
        LineKind::Alphabet(pds.symbols().map(|a| pds.symbol_name(a).to_string()).collect()),
        LineKind::Bottom(pds.symbol_name(pds.bottom()).to_string()),
    ];
    for r in pds.rules() {
        lines.push(LineKind::Rule {
            from: pds.control_name(r.from).to_string(),
            symbol: pds.symbol_name(r.symbol).to_string(),
            to: pds.control_name(r.to).to_string(),
            push: r.push.iter().map(|&b| pds.symbol_name(b).to_string()).collect(),
        });
    }
    numbered(BlockKind::Pds, lines)
}

fn numbered(kind: BlockKind, lines: Vec<LineKind>) -> Block {
    Block {
        kind,
        number: 0,
        lines: lines.into_iter().map(|kind| Line { number: 0, kind }).collect(),
    }
}

fn automaton_block(view: &View) -> Block {
    let name = |s: &State| view.names[s].clone();
    let mut lines = Vec::new();
    let declared: Vec<String> = view.names.keys().filter(|s| !view.entries.contains(s)).map(name).collect();
    if !declared.is_empty() {
        lines.push(LineKind::States(declared));
    }
    if !view.finals.is_empty() {
        lines.push(LineKind::Final(view.finals.iter().map(name).collect()));
    }
    for (s, a, t) in &view.edges {
        lines.push(match t.as_slice() {
            [u] => LineKind::Trans {
                from: name(s),
                symbol: a.clone(),
                to: name(u),
            },
            _ => LineKind::AltTrans {
                from: name(s),
                symbol: a.clone(),
                to: t.iter().map(|u| name(&u)).collect(),
            },
        });
    }
    numbered(BlockKind::Automaton, lines)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_body(out: &mut String, view: &View, prefix: &str, hyper: &mut usize) {
    let id = |s: &State| quote(&format!("{prefix}{}", view.names[s]));
    for s in view.names.keys() {
        let mut attrs = vec![format!("label={}", quote(&view.names[s]))];
        if view.finals.contains(s) {
            attrs.push("shape=doublecircle".into());
        }
        if view.entries.contains(s) {
            attrs.push("style=bold".into());
        }
        let _ = writeln!(out, "  {} [{}];", id(s), attrs.join(", "));
    }
    for (s, a, t) in &view.edges {
        if let [u] = t.as_slice() {
            let _ = writeln!(out, "  {} -> {} [label={}];", id(s), id(u), quote(a));
            continue;
        }
        let h = quote(&format!("{prefix}#{hyper}"));
        *hyper += 1;
        let _ = writeln!(out, "  {h} [shape=point, label=\"\"];");
        let _ = writeln!(out, "  {} -> {h} [label={}, arrowhead=none];", id(s), quote(a));
        for u in t.iter() {
            let _ = writeln!(out, "  {h} -> {};", id(&u));
        }
    }
}

fn dot(view: &View, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=LR;\n  node [shape=circle];\n");
    dot_body(&mut out, view, "", &mut 0);
    out.push_str("}\n");
    out
}

fn render_view(pds: &PushdownSystem, view: &View, format: Format, name: &str) -> String {
    match format {
        Format::Text => serialize(&InputDocument {
            blocks: vec![pds_block(pds), automaton_block(view)],
        }),
        Format::Dot => dot(view, name),
    }
}

pub fn render_pautomaton(pds: &PushdownSystem, a: &PAutomaton, format: Format) -> String {
    render_view(pds, &pautomaton_view(pds, a), format, "pautomaton")
}

pub fn render_region(pds: &PushdownSystem, r: &RegionAutomaton, format: Format) -> String {
    render_view(pds, &region_view(pds, r), format, "region")
}

fn language_view(pds: &PushdownSystem, lang: &Language) -> View {
    let lang = Language {
        aut: lang.aut.eps_closure(),
        start: lang.start,
    }
    .trim();
    let names = lang.aut.states().map(|s| (s, format!("s{}", s.0))).collect();
    let edges = lang
        .aut
        .transitions()
        .filter_map(|(s, l, t)| match l {
            Label::Sym(x) => Some((s, pds.symbol_name(x).to_string(), StateSet::singleton(t))),
            Label::Eps => None,
        })
        .collect();
    View {
        names,
        entries: [lang.start].into(),
        finals: lang.aut.finals().clone(),
        edges,
    }
}

/// Each pair `(U, V)` as two automata: `u·w` rewrites to `v·w` for `u ∈ U`
/// and `v ∈ V`.
pub fn render_relation(pds: &PushdownSystem, rel: &PrefixRewriteRelation, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            out.push_str("# u w derives v w for u in left and v in right\n");
            for (i, (u, v)) in rel.pairs().iter().enumerate() {
                for (side, lang) in [("left", u), ("right", v)] {
                    let view = language_view(pds, lang);
                    let name = |s: &State| view.names[s].clone();
                    let _ = writeln!(out, "pair {} {side}", i + 1);
                    let _ = writeln!(out, "  start {}", name(view.entries.first().expect("start state")));
                    if !view.finals.is_empty() {
                        let finals: Vec<String> = view.finals.iter().map(name).collect();
                        let _ = writeln!(out, "  final {}", finals.join(" "));
                    }
                    for (s, a, t) in &view.edges {
                        for u in t.iter() {
                            let _ = writeln!(out, "  trans {} {a} {}", name(s), name(&u));
                        }
                    }
                }
            }
        }
        Format::Dot => {
            out.push_str("digraph relation {\n  rankdir=LR;\n  node [shape=circle];\n");
            let mut hyper = 0;
            for (i, (u, v)) in rel.pairs().iter().enumerate() {
                for (side, lang) in [("left", u), ("right", v)] {
                    let prefix = format!("{}{side}:", i + 1);
                    let _ = writeln!(out, "  subgraph \"cluster_{}_{side}\" {{", i + 1);
                    let _ = writeln!(out, "  label={};", quote(&format!("pair {} {side}", i + 1)));
                    dot_body(&mut out, &language_view(pds, lang), &prefix, &mut hyper);
                    out.push_str("  }\n");
                }
            }
            out.push_str("}\n");
        }
    }
    out
}
