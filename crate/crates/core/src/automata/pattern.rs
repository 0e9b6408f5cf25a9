use std::collections::{BTreeMap, BTreeSet};

use crate::automata::nfa::Nfa;
use crate::error::{invalid, Result};
use crate::symbols::{State, Symbol};

/// Deterministic automaton for the words over `alphabet` that contain none
/// of the two-letter `factors`. Start from `State(0)`.
///
/// State 0 means "nothing read yet"; state `i + 1` remembers that the last
/// letter read was the `i`-th letter of `alphabet`. Every state is final and
/// the dead sink is left out.
pub fn pattern_forbidden_factors(alphabet: &BTreeSet<Symbol>, factors: &[Vec<Symbol>]) -> Result<Nfa> {
    let mut forbidden: BTreeSet<(Symbol, Symbol)> = BTreeSet::new();
    for f in factors {
        if f.len() != 2 {
            return invalid(format!("forbidden factor of length {} (expected 2)", f.len()));
        }
        for a in f {
            if !alphabet.contains(a) {
                return invalid(format!("factor letter {a} is not in the alphabet"));
            }
        }
        forbidden.insert((f[0], f[1]));
    }
    let slot: BTreeMap<Symbol, State> = alphabet
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, State::from(i + 1)))
        .collect();
    let mut aut = Nfa::with_states(alphabet.len() + 1, alphabet.iter().copied());
    for s in 0..=alphabet.len() {
        aut.set_final(State::from(s))?;
    }
    for &b in alphabet {
        aut.add_symbol(State(0), b, slot[&b])?;
        for &a in alphabet {
            if !forbidden.contains(&(a, b)) {
                aut.add_symbol(slot[&a], b, slot[&b])?;
            }
        }
    }
    Ok(aut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::words_up_to;

    #[test]
    fn single_factor() {
        // A+ = 0, A- = 1, B- = 2, C+ = 3
        let (ap, am, bm, cp) = (Symbol(0), Symbol(1), Symbol(2), Symbol(3));
        let alphabet: BTreeSet<Symbol> = [ap, am, bm, cp].into();
        let aut = pattern_forbidden_factors(&alphabet, &[vec![ap, am]]).unwrap();
        assert!(aut.accepts(State(0), &[bm, ap, cp]).unwrap());
        assert!(!aut.accepts(State(0), &[bm, ap, am]).unwrap());
    }

    #[test]
    fn no_factors_is_universal() {
        let alphabet: BTreeSet<Symbol> = [Symbol(0), Symbol(1)].into();
        let aut = pattern_forbidden_factors(&alphabet, &[]).unwrap();
        for w in words_up_to(&[Symbol(0), Symbol(1)], 5) {
            assert!(aut.accepts(State(0), &w).unwrap());
        }
    }

    #[test]
    fn bad_factor_length() {
        let alphabet: BTreeSet<Symbol> = [Symbol(0)].into();
        assert!(pattern_forbidden_factors(&alphabet, &[vec![Symbol(0)]]).is_err());
        assert!(pattern_forbidden_factors(&alphabet, &[vec![Symbol(0); 3]]).is_err());
    }

    #[test]
    fn push_pop_pairs_match_substring_scan() {
        // letters 0,2 are pushes of A,B; 1,3 the matching pops
        let letters = [Symbol(0), Symbol(1), Symbol(2), Symbol(3)];
        let alphabet: BTreeSet<Symbol> = letters.into();
        let factors: Vec<Vec<Symbol>> = [0u32, 2]
            .iter()
            .flat_map(|&push| [1u32, 3].iter().map(move |&pop| vec![Symbol(push), Symbol(pop)]))
            .collect();
        let aut = pattern_forbidden_factors(&alphabet, &factors).unwrap();
        for w in words_up_to(&letters, 6) {
            let has = w.windows(2).any(|p| factors.iter().any(|f| f[..] == p[..]));
            assert_eq!(aut.accepts(State(0), &w).unwrap(), !has, "{w:?}");
        }
    }
}
