//! Pushdown systems, configurations and their one-step semantics.

use std::collections::BTreeSet;
use std::fmt;

use crate::automata::Word;
use crate::error::{invalid, Error, Result};
use crate::symbols::{Control, Symbol, SymbolTable};

/// `(from, symbol) -> (to, push)` with `push` written top first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub from: Control,
    pub symbol: Symbol,
    pub to: Control,
    pub push: Word,
}

impl Rule {
    pub fn new(from: Control, symbol: Symbol, to: Control, push: impl Into<Word>) -> Self {
        Rule {
            from,
            symbol,
            to,
            push: push.into(),
        }
    }
}

/// A control state and a stack, top first, ending with the bottom symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub control: Control,
    pub stack: Word,
}

impl Configuration {
    pub fn new(control: Control, stack: impl Into<Word>) -> Self {
        Configuration {
            control,
            stack: stack.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleProblem {
    UnknownHandle,
    PushTooLong,
    PopsBottom,
    PushesBottom,
}

impl fmt::Display for RuleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleProblem::UnknownHandle => "unknown control or symbol",
            RuleProblem::PushTooLong => "pushes more than two symbols",
            RuleProblem::PopsBottom => "pops bottom",
            RuleProblem::PushesBottom => "pushes bottom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub rule: Rule,
    pub problem: RuleProblem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownSystem {
    controls: SymbolTable,
    symbols: SymbolTable,
    bottom: Symbol,
    rules: BTreeSet<Rule>,
    intermediary: BTreeSet<Control>,
}

impl PushdownSystem {
    pub fn new(controls: SymbolTable, symbols: SymbolTable, bottom: Symbol) -> Result<Self> {
        if !symbols.contains(bottom.0) {
            return invalid("bottom symbol is not in the stack alphabet");
        }
        Ok(PushdownSystem {
            controls,
            symbols,
            bottom,
            rules: BTreeSet::new(),
            intermediary: BTreeSet::new(),
        })
    }

    /// Convenience constructor from names; `bottom` must be among `symbols`.
    pub fn from_names(controls: &[&str], symbols: &[&str], bottom: &str) -> Result<Self> {
        let controls = SymbolTable::from_names(controls.iter().copied())?;
        let symbols = SymbolTable::from_names(symbols.iter().copied())?;
        let bottom = Symbol(symbols.lookup(bottom)?);
        Self::new(controls, symbols, bottom)
    }

    pub fn add_rule(&mut self, rule: Rule) -> bool {
        self.rules.insert(rule)
    }

    /// Adds `(from, symbol) -> (to, push)` by names.
    pub fn add_rule_named(&mut self, from: &str, symbol: &str, to: &str, push: &[&str]) -> Result<()> {
        let rule = Rule::new(
            self.control(from)?,
            self.symbol(symbol)?,
            self.control(to)?,
            push.iter().map(|s| self.symbol(s)).collect::<Result<Word>>()?,
        );
        self.rules.insert(rule);
        Ok(())
    }

    pub fn add_control(&mut self, name: &str) -> Control {
        Control(self.controls.intern(name))
    }

    pub fn control(&self, name: &str) -> Result<Control> {
        self.controls
            .lookup(name)
            .map(Control)
            .map_err(|_| Error::InvalidInput(format!("unknown control state `{name}`")))
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.symbols
            .lookup(name)
            .map(Symbol)
            .map_err(|_| Error::InvalidInput(format!("unknown stack symbol `{name}`")))
    }

    pub fn control_name(&self, c: Control) -> &str {
        self.controls.name(c.0)
    }

    pub fn symbol_name(&self, a: Symbol) -> &str {
        self.symbols.name(a.0)
    }

    pub fn control_table(&self) -> &SymbolTable {
        &self.controls
    }

    pub fn symbol_table(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn bottom(&self) -> Symbol {
        self.bottom
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn controls(&self) -> impl Iterator<Item = Control> {
        (0..self.controls.len()).map(Control::from)
    }

    /// Controls that are not intermediaries introduced by [`Self::invert`].
    pub fn original_controls(&self) -> impl Iterator<Item = Control> + '_ {
        self.controls().filter(|c| !self.intermediary.contains(c))
    }

    pub fn is_intermediary(&self, c: Control) -> bool {
        self.intermediary.contains(&c)
    }

    /// Every stack symbol, bottom included.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.symbols.len()).map(Symbol::from)
    }

    /// Stack symbols other than the bottom.
    pub fn stack_symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(|&a| a != self.bottom)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> + '_ {
        self.rules.iter()
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// Rules whose left-hand side is `(from, symbol)`.
    pub fn rules_from(&self, from: Control, symbol: Symbol) -> impl Iterator<Item = &Rule> + '_ {
        let lo = Rule::new(from, symbol, Control(0), Vec::new());
        self.rules
            .range(lo..)
            .take_while(move |r| r.from == from && r.symbol == symbol)
    }

    fn has_control(&self, c: Control) -> bool {
        self.controls.contains(c.0)
    }

    fn has_symbol(&self, a: Symbol) -> bool {
        self.symbols.contains(a.0)
    }

    /// Lists every rule that breaks the shape constraints.
    pub fn validate(&self) -> std::result::Result<(), Vec<RuleViolation>> {
        let mut out = Vec::new();
        for rule in &self.rules {
            let problem = self.rule_problem(rule);
            if let Some(problem) = problem {
                out.push(RuleViolation {
                    rule: rule.clone(),
                    problem,
                });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn rule_problem(&self, rule: &Rule) -> Option<RuleProblem> {
        if !self.has_control(rule.from)
            || !self.has_control(rule.to)
            || !self.has_symbol(rule.symbol)
            || rule.push.iter().any(|&a| !self.has_symbol(a))
        {
            return Some(RuleProblem::UnknownHandle);
        }
        if rule.push.len() > 2 {
            return Some(RuleProblem::PushTooLong);
        }
        let bottoms = rule.push.iter().filter(|&&a| a == self.bottom).count();
        if rule.symbol == self.bottom {
            if rule.push.last() != Some(&self.bottom) {
                Some(RuleProblem::PopsBottom)
            } else if bottoms > 1 {
                Some(RuleProblem::PushesBottom)
            } else {
                None
            }
        } else if bottoms > 0 {
            Some(RuleProblem::PushesBottom)
        } else {
            None
        }
    }

    /// [`Self::validate`] folded into a single error.
    pub fn check(&self) -> Result<()> {
        self.validate().map_err(|violations| {
            let msgs: Vec<String> = violations
                .iter()
                .map(|v| format!("rule {}: {}", self.format_rule(&v.rule), v.problem))
                .collect();
            Error::InvalidInput(msgs.join("; "))
        })
    }

    pub fn is_valid_configuration(&self, c: &Configuration) -> bool {
        self.has_control(c.control)
            && c.stack.last() == Some(&self.bottom)
            && c.stack[..c.stack.len() - 1]
                .iter()
                .all(|&a| a != self.bottom && self.has_symbol(a))
    }

    pub fn check_configuration(&self, c: &Configuration) -> Result<()> {
        if self.is_valid_configuration(c) {
            Ok(())
        } else {
            invalid(format!("invalid configuration {}", self.format_config(c)))
        }
    }

    /// One-step successors.
    pub fn successors(&self, c: &Configuration) -> BTreeSet<Configuration> {
        let Some((&top, rest)) = c.stack.split_first() else {
            return BTreeSet::new();
        };
        self.rules_from(c.control, top)
            .map(|r| {
                let mut stack = r.push.clone();
                stack.extend_from_slice(rest);
                Configuration::new(r.to, stack)
            })
            .collect()
    }

    /// One-step predecessors that are valid configurations.
    pub fn predecessors(&self, c: &Configuration) -> BTreeSet<Configuration> {
        let mut out = BTreeSet::new();
        for r in self.rules.iter().filter(|r| r.to == c.control) {
            if c.stack.starts_with(&r.push) {
                let mut stack = vec![r.symbol];
                stack.extend_from_slice(&c.stack[r.push.len()..]);
                let p = Configuration::new(r.from, stack);
                if self.is_valid_configuration(&p) {
                    out.insert(p);
                }
            }
        }
        out
    }

    /// A system whose derivation relation is the inverse of this one on the
    /// original controls.
    ///
    /// Pops `(q,A) -> (p,ε)` become `(p,X) -> (q,AX)` for every `X`, swaps
    /// are reversed, and a push `(q,A) -> (p,BC)` becomes `(p,B) -> (r,ε)`
    /// followed by `(r,C) -> (q,A)` through a fresh intermediary control
    /// `r(C,q,A)`.
    pub fn invert(&self) -> PushdownSystem {
        let mut out = PushdownSystem {
            controls: self.controls.clone(),
            symbols: self.symbols.clone(),
            bottom: self.bottom,
            rules: BTreeSet::new(),
            intermediary: self.intermediary.clone(),
        };
        for rule in &self.rules {
            match rule.push.as_slice() {
                [] => {
                    for x in self.symbols() {
                        out.rules.insert(Rule::new(rule.to, x, rule.from, vec![rule.symbol, x]));
                    }
                }
                [b] => {
                    out.rules.insert(Rule::new(rule.to, *b, rule.from, vec![rule.symbol]));
                }
                [b, c] => {
                    let r = out.fresh_intermediary(&format!(
                        "r({},{},{})",
                        self.symbol_name(*c),
                        self.control_name(rule.from),
                        self.symbol_name(rule.symbol)
                    ));
                    out.rules.insert(Rule::new(rule.to, *b, r, vec![]));
                    out.rules.insert(Rule::new(r, *c, rule.from, vec![rule.symbol]));
                }
                _ => {}
            }
        }
        out
    }

    fn fresh_intermediary(&mut self, base: &str) -> Control {
        if let Some(h) = self.controls.get(base) {
            if self.intermediary.contains(&Control(h)) {
                return Control(h);
            }
        }
        let mut name = base.to_string();
        while self.controls.get(&name).is_some() {
            name.push('\'');
        }
        let c = Control(self.controls.intern(&name));
        self.intermediary.insert(c);
        c
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        w.iter()
            .map(|&a| self.symbols.name(a.0))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `p : A B _` style rendering, top first.
    pub fn format_config(&self, c: &Configuration) -> String {
        let control = if self.has_control(c.control) {
            self.control_name(c.control).to_string()
        } else {
            c.control.to_string()
        };
        format!("{} : {}", control, self.format_word(&c.stack))
    }

    pub fn format_rule(&self, r: &Rule) -> String {
        let name = |a: Symbol| {
            if self.has_symbol(a) {
                self.symbol_name(a).to_string()
            } else {
                a.to_string()
            }
        };
        let ctl = |c: Control| {
            if self.has_control(c) {
                self.control_name(c).to_string()
            } else {
                c.to_string()
            }
        };
        let mut s = format!("{} {} -> {}", ctl(r.from), name(r.symbol), ctl(r.to));
        for &a in &r.push {
            s.push(' ');
            s.push_str(&name(a));
        }
        s
    }

    /// Parses `p : A B _`; the bottom symbol must come last.
    pub fn parse_config(&self, text: &str) -> Result<Configuration> {
        let (control, stack) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("expected `control : stack`, got `{text}`")))?;
        let control = self.control(control.trim())?;
        let stack = stack
            .split_whitespace()
            .map(|s| self.symbol(s))
            .collect::<Result<Word>>()?;
        let c = Configuration::new(control, stack);
        self.check_configuration(&c)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_pds, stacks_up_to};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{HashSet, VecDeque};

    fn sys(rules: &[(&str, &str, &str, &[&str])]) -> PushdownSystem {
        let mut p = PushdownSystem::from_names(&["p", "q", "r"], &["A", "B", "C", "_"], "_").unwrap();
        for (a, b, c, d) in rules {
            p.add_rule_named(a, b, c, d).unwrap();
        }
        p
    }

    fn cfg(p: &PushdownSystem, s: &str) -> Configuration {
        p.parse_config(s).unwrap()
    }

    #[test]
    fn validate_shapes() {
        assert!(sys(&[("p", "A", "q", &[])]).validate().is_ok());
        let e = sys(&[("p", "_", "q", &[])]).validate().unwrap_err();
        assert_eq!(e[0].problem, RuleProblem::PopsBottom);
        assert_eq!(e[0].problem.to_string(), "pops bottom");
        let e = sys(&[("p", "A", "q", &["_", "A"])]).validate().unwrap_err();
        assert_eq!(e[0].problem, RuleProblem::PushesBottom);
        assert!(sys(&[("p", "_", "q", &["A", "_"])]).validate().is_ok());
        assert!(sys(&[("p", "_", "q", &["_"])]).validate().is_ok());
        let e = sys(&[("p", "_", "q", &["_", "A"])]).validate().unwrap_err();
        assert_eq!(e[0].problem, RuleProblem::PopsBottom);
    }

    #[test]
    fn validate_lists_every_offender() {
        let p = sys(&[("p", "_", "q", &[]), ("q", "A", "q", &["_"]), ("r", "A", "r", &[])]);
        assert_eq!(p.validate().unwrap_err().len(), 2);
    }

    #[test]
    fn successor_examples() {
        let p = sys(&[("p", "A", "q", &[])]);
        assert_eq!(p.successors(&cfg(&p, "p : A _")), BTreeSet::from([cfg(&p, "q : _")]));
        assert!(p.successors(&cfg(&p, "q : A _")).is_empty());
        let p = sys(&[("p", "A", "q", &["B", "A"]), ("p", "A", "r", &[])]);
        assert_eq!(
            p.successors(&cfg(&p, "p : A _")),
            BTreeSet::from([cfg(&p, "q : B A _"), cfg(&p, "r : _")])
        );
    }

    #[test]
    fn predecessor_examples() {
        let p = sys(&[("p", "A", "q", &[])]);
        assert_eq!(p.predecessors(&cfg(&p, "q : _")), BTreeSet::from([cfg(&p, "p : A _")]));
        assert!(p.predecessors(&cfg(&p, "p : _")).is_empty());
    }

    #[test]
    fn successors_and_predecessors_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let p = random_pds(&mut rng, 3, 2, 6);
            let configs: Vec<Configuration> = p
                .controls()
                .flat_map(|c| stacks_up_to(&p, 4).into_iter().map(move |s| Configuration::new(c, s)))
                .collect();
            for c in &configs {
                for s in p.successors(c) {
                    assert!(p.is_valid_configuration(&s));
                    assert!(p.predecessors(&s).contains(c));
                }
                for d in p.predecessors(c) {
                    assert!(p.successors(&d).contains(c));
                }
            }
        }
    }

    #[test]
    fn invert_examples() {
        let p = sys(&[("p", "A", "q", &["B"])]);
        let inv = p.invert();
        assert!(inv.rules().any(|r| inv.format_rule(r) == "q B -> p A"));
        let p = sys(&[("p", "A", "q", &["B", "C"])]);
        let inv = p.invert();
        let r = inv.control("r(C,p,A)").unwrap();
        assert!(inv.is_intermediary(r));
        assert!(inv.rules().any(|x| inv.format_rule(x) == "q B -> r(C,p,A)"));
        assert!(inv.rules().any(|x| inv.format_rule(x) == "r(C,p,A) C -> p A"));
        assert!(inv.validate().is_ok());
    }

    fn reach_within(p: &PushdownSystem, from: &Configuration, steps: usize) -> HashSet<Configuration> {
        let mut seen = HashSet::from([from.clone()]);
        let mut queue = VecDeque::from([(from.clone(), 0)]);
        while let Some((c, d)) = queue.pop_front() {
            if d == steps {
                continue;
            }
            for s in p.successors(&c) {
                if seen.insert(s.clone()) {
                    queue.push_back((s, d + 1));
                }
            }
        }
        seen
    }

    #[test]
    fn invert_reverses_bounded_derivations() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..40 {
            let p = random_pds(&mut rng, 3, 2, 6);
            let inv = p.invert();
            assert!(inv.validate().is_ok());
            let configs: Vec<Configuration> = p
                .controls()
                .flat_map(|c| stacks_up_to(&p, 3).into_iter().map(move |s| Configuration::new(c, s)))
                .collect();
            for c in &configs {
                // each P step is at most two P' steps
                let forward = reach_within(&p, c, 4);
                let backward = reach_within(&inv, c, 4);
                for d in &configs {
                    if forward.contains(d) {
                        assert!(reach_within(&inv, d, 8).contains(c));
                    }
                    if backward.contains(d) {
                        assert!(reach_within(&p, d, 4).contains(c));
                    }
                }
            }
        }
    }

    #[test]
    fn config_text() {
        let p = sys(&[]);
        let c = cfg(&p, "p : A B _");
        assert_eq!(p.format_config(&c), "p : A B _");
        assert!(p.parse_config("p : _ A").is_err());
        assert!(p.parse_config("p : A").is_err());
        assert!(p.parse_config("x : _").is_err());
    }
}
