use std::collections::HashMap;

use crate::automata::Word;
use crate::error::{invalid, Result};
use crate::pds::PushdownSystem;
use crate::symbols::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Push(Symbol),
    Pop(Symbol),
}

/// Push and pop actions over a base alphabet. The `k`-th base symbol `A`
/// gets `A₊ = Symbol(2k)` and `A₋ = Symbol(2k + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionAlphabet {
    base: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl ActionAlphabet {
    pub fn new(base: impl IntoIterator<Item = Symbol>) -> Self {
        let mut out = ActionAlphabet {
            base: Vec::new(),
            index: HashMap::new(),
        };
        for a in base {
            if !out.index.contains_key(&a) {
                out.index.insert(a, out.base.len());
                out.base.push(a);
            }
        }
        out
    }

    /// Actions over the non-bottom stack symbols of `pds`.
    pub fn for_system(pds: &PushdownSystem) -> Self {
        Self::new(pds.stack_symbols())
    }

    pub fn base(&self) -> &[Symbol] {
        &self.base
    }

    pub fn len(&self) -> usize {
        2 * self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    fn slot(&self, a: Symbol) -> Result<usize> {
        match self.index.get(&a) {
            Some(&k) => Ok(k),
            None => invalid(format!("symbol {a} has no actions")),
        }
    }

    pub fn push(&self, a: Symbol) -> Result<Symbol> {
        Ok(Symbol::from(2 * self.slot(a)?))
    }

    pub fn pop(&self, a: Symbol) -> Result<Symbol> {
        Ok(Symbol::from(2 * self.slot(a)? + 1))
    }

    pub fn decode(&self, x: Symbol) -> Option<Action> {
        let base = *self.base.get(x.index() / 2)?;
        Some(if x.index().is_multiple_of(2) {
            Action::Push(base)
        } else {
            Action::Pop(base)
        })
    }

    /// All action symbols, pushes and pops interleaved.
    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.len()).map(Symbol::from).collect()
    }

    pub fn pushes(&self) -> Vec<Symbol> {
        (0..self.base.len()).map(|k| Symbol::from(2 * k)).collect()
    }

    pub fn pops(&self) -> Vec<Symbol> {
        (0..self.base.len()).map(|k| Symbol::from(2 * k + 1)).collect()
    }

    pub fn is_push(&self, x: Symbol) -> bool {
        matches!(self.decode(x), Some(Action::Push(_)))
    }

    pub fn is_pop(&self, x: Symbol) -> bool {
        matches!(self.decode(x), Some(Action::Pop(_)))
    }

    /// `A+` or `A-` using the stack symbol names of `pds`.
    pub fn name(&self, pds: &PushdownSystem, x: Symbol) -> String {
        match self.decode(x) {
            Some(Action::Push(a)) => format!("{}+", pds.symbol_name(a)),
            Some(Action::Pop(a)) => format!("{}-", pds.symbol_name(a)),
            None => format!("?{x}"),
        }
    }
}

/// Runs the actions on `stack` (top first). `None` if some pop does not
/// match the top symbol or an action symbol is unknown.
pub fn apply_actions(actions: &ActionAlphabet, stack: &[Symbol], alpha: &[Symbol]) -> Option<Word> {
    let mut rev: Vec<Symbol> = stack.iter().rev().copied().collect();
    for &x in alpha {
        match actions.decode(x)? {
            Action::Push(a) => rev.push(a),
            Action::Pop(a) => {
                if rev.pop()? != a {
                    return None;
                }
            }
        }
    }
    rev.reverse();
    Some(rev)
}

/// The reduced form of `alpha`: every factor `A₊A₋` erased until none is
/// left.
pub fn reduce_sequence(actions: &ActionAlphabet, alpha: &[Symbol]) -> Word {
    let mut out: Word = Vec::with_capacity(alpha.len());
    for &x in alpha {
        let cancels = match (out.last().and_then(|&y| actions.decode(y)), actions.decode(x)) {
            (Some(Action::Push(a)), Some(Action::Pop(b))) => a == b,
            _ => false,
        };
        if cancels {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::words_up_to;

    fn letters() -> (ActionAlphabet, [Symbol; 4]) {
        let base = [Symbol(0), Symbol(1), Symbol(2), Symbol(3)];
        (ActionAlphabet::new(base), base)
    }

    #[test]
    fn apply_example() {
        let (act, [a, b, c, d]) = letters();
        let alpha = [act.pop(a).unwrap(), act.pop(b).unwrap(), act.push(c).unwrap(), act.push(d).unwrap()];
        assert_eq!(apply_actions(&act, &[a, b, b], &alpha), Some(vec![d, c, b]));
        assert_eq!(apply_actions(&act, &[a, b], &[]), Some(vec![a, b]));
        let bad = [act.push(b).unwrap(), act.pop(c).unwrap()];
        for w in words_up_to(&[a, b, c], 3) {
            assert_eq!(apply_actions(&act, &w, &bad), None);
        }
    }

    /// Erase the leftmost `A₊A₋` factor until none remains.
    fn naive_reduce(act: &ActionAlphabet, alpha: &[Symbol]) -> Word {
        let mut w = alpha.to_vec();
        'outer: loop {
            for i in 0..w.len().saturating_sub(1) {
                if let (Some(Action::Push(x)), Some(Action::Pop(y))) = (act.decode(w[i]), act.decode(w[i + 1])) {
                    if x == y {
                        w.drain(i..i + 2);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    #[test]
    fn reduce_example() {
        let (act, [a, b, c, _]) = letters();
        let (ap, am) = (act.push(a).unwrap(), act.pop(a).unwrap());
        let alpha = [act.pop(b).unwrap(), ap, ap, am, am, act.push(c).unwrap()];
        assert_eq!(reduce_sequence(&act, &alpha), vec![act.pop(b).unwrap(), act.push(c).unwrap()]);
        assert_eq!(reduce_sequence(&act, &[ap, am]), Vec::<Symbol>::new());
    }

    #[test]
    fn reduction_preserves_action() {
        let act = ActionAlphabet::new([Symbol(0), Symbol(1)]);
        let stacks = words_up_to(&[Symbol(0), Symbol(1)], 3);
        for alpha in words_up_to(&act.symbols(), 6) {
            let red = reduce_sequence(&act, &alpha);
            assert_eq!(red, naive_reduce(&act, &alpha));
            for u in &stacks {
                assert_eq!(apply_actions(&act, u, &alpha), apply_actions(&act, u, &red));
            }
        }
    }
}
