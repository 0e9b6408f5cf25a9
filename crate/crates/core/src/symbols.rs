//! Interned names and the small integer handles used everywhere else.

use std::collections::HashMap;
use std::fmt;

use crate::error::{invalid, Result};

macro_rules! handle {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

handle!(
    /// A stack symbol or action letter.
    Symbol
);
handle!(
    /// A state of a finite or alternating automaton.
    State
);
handle!(
    /// A control state of a pushdown system.
    Control
);

/// Bijection between names and dense handles `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for name in names {
            let name = name.into();
            if table.index.contains_key(&name) {
                return invalid(format!("duplicate name `{name}`"));
            }
            table.intern(&name);
        }
        Ok(table)
    }

    /// Returns the handle of `name`, allocating a fresh one if needed.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&h) = self.index.get(name) {
            return h;
        }
        let h = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), h);
        h
    }

    pub fn lookup(&self, name: &str) -> Result<u32> {
        match self.index.get(name) {
            Some(&h) => Ok(h),
            None => invalid(format!("unknown name `{name}`")),
        }
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, handle: u32) -> &str {
        &self.names[handle as usize]
    }

    pub fn contains(&self, handle: u32) -> bool {
        (handle as usize) < self.names.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let mut t = SymbolTable::new();
        let a = t.intern("A");
        let b = t.intern("B");
        assert_eq!(t.intern("A"), a);
        assert_ne!(a, b);
        assert_eq!(t.name(b), "B");
        assert_eq!(t.lookup("B").unwrap(), b);
    }

    #[test]
    fn unknown_name_fails() {
        let t = SymbolTable::from_names(["p", "q"]).unwrap();
        assert!(t.lookup("r").is_err());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(SymbolTable::from_names(["p", "p"]).is_err());
    }
}
