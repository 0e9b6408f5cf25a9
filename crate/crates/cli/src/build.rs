//! Turns a parsed document into library objects, reporting problems with
//! the line they come from.

use std::collections::{BTreeSet, HashMap};

use pdsat::automata::{AltAutomaton, Label, Nfa, StateSet};
use pdsat::games::{Player, PushdownGame, ReachTarget, WinningCondition};
use pdsat::pds::{PushdownSystem, Rule};
use pdsat::reachability::PAutomaton;
use pdsat::{Control, State, Symbol};

use crate::doc::{Block, BlockKind, InputDocument, LineKind};
use crate::error::{CliError, Result};

/// Records first declarations so duplicates can point back to them.
struct Declared {
    what: &'static str,
    seen: HashMap<String, usize>,
    order: Vec<String>,
}

impl Declared {
    fn new(what: &'static str) -> Self {
        Declared {
            what,
            seen: HashMap::new(),
            order: Vec::new(),
        }
    }

    fn add(&mut self, line: usize, name: &str) -> Result<()> {
        if let Some(first) = self.seen.get(name) {
            return Err(CliError::at(
                line,
                format!("duplicate {} `{name}` (first declared on line {first})", self.what),
            ));
        }
        self.seen.insert(name.to_string(), line);
        self.order.push(name.to_string());
        Ok(())
    }
}

fn required<'a>(doc: &'a InputDocument, kind: BlockKind, why: &str) -> Result<&'a Block> {
    doc.block(kind)
        .ok_or_else(|| CliError::Invalid(format!("missing `{}` block ({why})", kind.keyword())))
}

pub fn build_pds(doc: &InputDocument) -> Result<PushdownSystem> {
    let block = required(doc, BlockKind::Pds, "every input needs one")?;
    let mut controls = Declared::new("state");
    let mut symbols = Declared::new("symbol");
    let mut bottom: Option<(usize, &str)> = None;
    for line in &block.lines {
        match &line.kind {
            LineKind::States(names) => names.iter().try_for_each(|n| controls.add(line.number, n))?,
            LineKind::Alphabet(names) => names.iter().try_for_each(|n| symbols.add(line.number, n))?,
            LineKind::Bottom(b) => {
                if let Some((first, _)) = bottom {
                    return Err(CliError::at(line.number, format!("duplicate `bottom` (first on line {first})")));
                }
                bottom = Some((line.number, b.as_str()));
            }
            _ => {}
        }
    }
    let (_, bottom) = bottom.ok_or_else(|| CliError::at(block.number, "missing `bottom` declaration"))?;
    if !symbols.seen.contains_key(bottom) {
        symbols.order.push(bottom.to_string());
    }
    if controls.order.is_empty() {
        return Err(CliError::at(block.number, "no control states declared"));
    }
    let c: Vec<&str> = controls.order.iter().map(String::as_str).collect();
    let s: Vec<&str> = symbols.order.iter().map(String::as_str).collect();
    let mut pds = PushdownSystem::from_names(&c, &s, bottom)?;

    let mut rule_lines: HashMap<Rule, usize> = HashMap::new();
    for line in &block.lines {
        let LineKind::Rule { from, symbol, to, push } = &line.kind else { continue };
        let control = |n: &str| {
            pds.control(n)
                .map_err(|_| CliError::at(line.number, format!("undeclared state `{n}`")))
        };
        let sym = |n: &str| {
            pds.symbol(n)
                .map_err(|_| CliError::at(line.number, format!("undeclared symbol `{n}`")))
        };
        let rule = Rule::new(
            control(from)?,
            sym(symbol)?,
            control(to)?,
            push.iter().map(|b| sym(b)).collect::<Result<Vec<Symbol>>>()?,
        );
        if let Some(first) = rule_lines.get(&rule) {
            return Err(CliError::at(line.number, format!("duplicate rule (first on line {first})")));
        }
        rule_lines.insert(rule.clone(), line.number);
        pds.add_rule(rule);
    }
    if let Err(violations) = pds.validate() {
        let v = violations
            .iter()
            .min_by_key(|v| rule_lines.get(&v.rule))
            .expect("at least one violation");
        return Err(CliError::at(
            rule_lines[&v.rule],
            format!("rule `{}` {}", pds.format_rule(&v.rule), v.problem),
        ));
    }
    Ok(pds)
}

/// State numbering of an `automaton` block.
///
/// Controls without an `embed` line get an implicit entry state named after
/// them; these come first, followed by the declared states.
struct StateNames {
    index: HashMap<String, State>,
    count: usize,
    embed: Vec<State>,
}

impl StateNames {
    fn resolve(&self, line: usize, name: &str) -> Result<State> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CliError::at(line, format!("undeclared automaton state `{name}`")))
    }
}

fn state_names(block: &Block, pds: &PushdownSystem) -> Result<StateNames> {
    let mut declared = Declared::new("automaton state");
    let mut embeds: HashMap<Control, (usize, String)> = HashMap::new();
    for line in &block.lines {
        match &line.kind {
            LineKind::States(names) => {
                for n in names {
                    if pds.control(n).is_ok() {
                        return Err(CliError::at(
                            line.number,
                            format!("`{n}` names a control state; it is an entry state already"),
                        ));
                    }
                    declared.add(line.number, n)?;
                }
            }
            LineKind::Embed { control, state } => {
                let c = pds
                    .control(control)
                    .map_err(|_| CliError::at(line.number, format!("undeclared state `{control}`")))?;
                if let Some((first, _)) = embeds.get(&c) {
                    return Err(CliError::at(
                        line.number,
                        format!("duplicate `embed` for `{control}` (first on line {first})"),
                    ));
                }
                embeds.insert(c, (line.number, state.clone()));
            }
            _ => {}
        }
    }
    let mut index = HashMap::new();
    let mut count = 0;
    for c in pds.controls() {
        if !embeds.contains_key(&c) {
            index.insert(pds.control_name(c).to_string(), State::from(count));
            count += 1;
        }
    }
    for n in &declared.order {
        index.insert(n.clone(), State::from(count));
        count += 1;
    }
    let mut embed = Vec::new();
    for c in pds.controls() {
        let s = match embeds.get(&c) {
            Some((line, state)) => {
                let s = *index
                    .get(state)
                    .ok_or_else(|| CliError::at(*line, format!("undeclared automaton state `{state}`")))?;
                index.insert(pds.control_name(c).to_string(), s);
                s
            }
            None => index[pds.control_name(c)],
        };
        embed.push(s);
    }
    Ok(StateNames { index, count, embed })
}

fn symbol(pds: &PushdownSystem, line: usize, name: &str) -> Result<Symbol> {
    pds.symbol(name)
        .map_err(|_| CliError::at(line, format!("undeclared symbol `{name}`")))
}

/// The `automaton` block as a P-automaton. Alternating transitions must
/// have a single target.
pub fn build_pautomaton(doc: &InputDocument, pds: &PushdownSystem) -> Result<PAutomaton> {
    let block = required(doc, BlockKind::Automaton, "the command needs a target automaton")?;
    let names = state_names(block, pds)?;
    let mut nfa = Nfa::with_states(names.count, pds.symbols());
    for line in &block.lines {
        let n = line.number;
        match &line.kind {
            LineKind::Final(fs) => {
                for f in fs {
                    nfa.set_final(names.resolve(n, f)?)?;
                }
            }
            LineKind::Trans { from, symbol: a, to } => {
                let label = Label::Sym(symbol(pds, n, a)?);
                nfa.add_transition(names.resolve(n, from)?, label, names.resolve(n, to)?)?;
            }
            LineKind::AltTrans { from, symbol: a, to } => {
                let [to] = to.as_slice() else {
                    return Err(CliError::at(n, "a P-automaton transition has exactly one target"));
                };
                let label = Label::Sym(symbol(pds, n, a)?);
                nfa.add_transition(names.resolve(n, from)?, label, names.resolve(n, to)?)?;
            }
            _ => {}
        }
    }
    Ok(PAutomaton::new(nfa, names.embed)?)
}

/// The `automaton` block as an alternating reachability target.
pub fn build_target(doc: &InputDocument, pds: &PushdownSystem) -> Result<ReachTarget> {
    required(doc, BlockKind::Automaton, "reachability games need a target automaton")?;
    let (aut, embed) = build_alternating(doc, pds)?;
    Ok(ReachTarget::new(aut, embed)?)
}

/// The `automaton` block as an alternating automaton with its entry state
/// per control, without further conditions on its shape.
pub fn build_alternating(doc: &InputDocument, pds: &PushdownSystem) -> Result<(AltAutomaton, Vec<State>)> {
    let block = required(doc, BlockKind::Automaton, "the command needs an automaton")?;
    let names = state_names(block, pds)?;
    let mut aut = AltAutomaton::new(pds.symbols());
    for s in 0..names.count {
        aut.add_state(State::from(s));
    }
    for line in &block.lines {
        let n = line.number;
        match &line.kind {
            LineKind::Final(fs) => {
                for f in fs {
                    aut.set_final(names.resolve(n, f)?)?;
                }
            }
            LineKind::Trans { from, symbol: a, to } => {
                let target = StateSet::singleton(names.resolve(n, to)?);
                aut.add_transition(names.resolve(n, from)?, symbol(pds, n, a)?, target)?;
            }
            LineKind::AltTrans { from, symbol: a, to } => {
                let target = StateSet::new(to.iter().map(|t| names.resolve(n, t)).collect::<Result<Vec<_>>>()?);
                aut.add_transition(names.resolve(n, from)?, symbol(pds, n, a)?, target)?;
            }
            _ => {}
        }
    }
    Ok((aut, names.embed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Reachability,
    Buchi,
    Parity,
}

pub fn build_game(doc: &InputDocument, pds: &PushdownSystem, kind: GameKind) -> Result<PushdownGame> {
    let block = required(doc, BlockKind::Game, "games need owners")?;
    let control = |line: usize, n: &str| {
        pds.control(n)
            .map_err(|_| CliError::at(line, format!("undeclared state `{n}`")))
    };
    let mut owners: Vec<Option<(usize, Player)>> = vec![None; pds.num_controls()];
    let mut colours: Vec<Option<(usize, u32)>> = vec![None; pds.num_controls()];
    let mut finals: BTreeSet<Control> = BTreeSet::new();
    for line in &block.lines {
        let n = line.number;
        match &line.kind {
            LineKind::Owner(player, names) => {
                for name in names {
                    let c = control(n, name)?;
                    if let Some((first, _)) = owners[c.index()] {
                        return Err(CliError::at(n, format!("duplicate owner for `{name}` (first on line {first})")));
                    }
                    owners[c.index()] = Some((n, *player));
                }
            }
            LineKind::Colour(name, k) => {
                let c = control(n, name)?;
                if let Some((first, _)) = colours[c.index()] {
                    return Err(CliError::at(n, format!("duplicate colour for `{name}` (first on line {first})")));
                }
                colours[c.index()] = Some((n, *k));
            }
            LineKind::Final(names) => {
                for name in names {
                    if !finals.insert(control(n, name)?) {
                        return Err(CliError::at(n, format!("duplicate final state `{name}`")));
                    }
                }
            }
            _ => {}
        }
    }
    let mut owner_list = Vec::new();
    for c in pds.controls() {
        match owners[c.index()] {
            Some((_, p)) => owner_list.push(p),
            None => {
                return Err(CliError::at(
                    block.number,
                    format!("state `{}` has no owner", pds.control_name(c)),
                ))
            }
        }
    }
    let condition = match kind {
        GameKind::Reachability => WinningCondition::Reachability(build_target(doc, pds)?),
        GameKind::Buchi => WinningCondition::Buchi(finals),
        GameKind::Parity => {
            let mut list = Vec::new();
            for c in pds.controls() {
                match colours[c.index()] {
                    Some((_, k)) => list.push(k),
                    None => {
                        return Err(CliError::at(
                            block.number,
                            format!("state `{}` has no colour", pds.control_name(c)),
                        ))
                    }
                }
            }
            WinningCondition::Parity(list)
        }
    };
    Ok(PushdownGame::new(pds.clone(), owner_list, condition)?)
}
