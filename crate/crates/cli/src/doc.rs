//! The line-oriented input format.
//!
//! ```text
//! pds
//!   states p q
//!   alphabet A B _
//!   bottom _
//!   rule p A -> q B C
//! automaton
//!   states s
//!   final s
//!   trans q A s
//! ```
//!
//! Block headers stand alone on a line; `#` starts a comment.

use std::fmt::{self, Write};

use pdsat::games::Player;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Pds,
    Automaton,
    Game,
}

impl BlockKind {
    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Pds => "pds",
            BlockKind::Automaton => "automaton",
            BlockKind::Game => "game",
        }
    }

    fn allows(self, line: &LineKind) -> bool {
        use LineKind::*;
        match self {
            BlockKind::Pds => matches!(line, States(_) | Alphabet(_) | Bottom(_) | Rule { .. }),
            BlockKind::Automaton => matches!(line, States(_) | Final(_) | Trans { .. } | AltTrans { .. } | Embed { .. }),
            BlockKind::Game => matches!(line, Owner(..) | Colour(..) | Final(_)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineKind {
    States(Vec<String>),
    Alphabet(Vec<String>),
    Bottom(String),
    Rule {
        from: String,
        symbol: String,
        to: String,
        push: Vec<String>,
    },
    Owner(Player, Vec<String>),
    Colour(String, u32),
    Final(Vec<String>),
    Trans {
        from: String,
        symbol: String,
        to: String,
    },
    AltTrans {
        from: String,
        symbol: String,
        to: Vec<String>,
    },
    Embed {
        control: String,
        state: String,
    },
}

#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub kind: LineKind,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub kind: BlockKind,
    pub number: usize,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, Default)]
pub struct InputDocument {
    pub blocks: Vec<Block>,
}

impl InputDocument {
    pub fn block(&self, kind: BlockKind) -> Option<&Block> {
        self.blocks.iter().find(|b| b.kind == kind)
    }

    /// The document without line numbers, for structural comparison.
    pub fn structure(&self) -> Vec<(BlockKind, Vec<LineKind>)> {
        self.blocks
            .iter()
            .map(|b| (b.kind, b.lines.iter().map(|l| l.kind.clone()).collect()))
            .collect()
    }
}

fn is_name(tok: &str) -> bool {
    !tok.is_empty() && tok != "->" && !tok.contains(['{', '}', '#']) && !tok.chars().any(char::is_whitespace)
}

fn names(number: usize, toks: &[&str], what: &str) -> Result<Vec<String>> {
    if toks.is_empty() {
        return Err(CliError::at(number, format!("`{what}` needs at least one name")));
    }
    toks.iter().map(|t| name(number, t)).collect()
}

fn name(number: usize, tok: &str) -> Result<String> {
    if is_name(tok) {
        Ok(tok.to_string())
    } else {
        Err(CliError::at(number, format!("`{tok}` is not a valid name")))
    }
}

fn exact<'a>(number: usize, toks: &'a [&'a str], n: usize, usage: &str) -> Result<&'a [&'a str]> {
    if toks.len() == n {
        Ok(toks)
    } else {
        Err(CliError::at(number, format!("expected `{usage}`")))
    }
}

fn parse_line(number: usize, keyword: &str, toks: &[&str]) -> Result<LineKind> {
    Ok(match keyword {
        "states" => LineKind::States(names(number, toks, keyword)?),
        "alphabet" => LineKind::Alphabet(names(number, toks, keyword)?),
        "final" => LineKind::Final(names(number, toks, keyword)?),
        "bottom" => {
            let t = exact(number, toks, 1, "bottom SYMBOL")?;
            LineKind::Bottom(name(number, t[0])?)
        }
        "rule" => {
            const USAGE: &str = "rule p A -> q [B [C]]";
            if toks.len() < 4 || toks[2] != "->" {
                return Err(CliError::at(number, format!("malformed rule, expected `{USAGE}`")));
            }
            if toks.len() > 6 {
                return Err(CliError::at(number, "a rule pushes at most two symbols"));
            }
            LineKind::Rule {
                from: name(number, toks[0])?,
                symbol: name(number, toks[1])?,
                to: name(number, toks[3])?,
                push: toks[4..].iter().map(|t| name(number, t)).collect::<Result<_>>()?,
            }
        }
        "owner" => {
            let (player, rest) = toks
                .split_first()
                .ok_or_else(|| CliError::at(number, "expected `owner E|A p...`"))?;
            let player = match *player {
                "E" => Player::Eloise,
                "A" => Player::Abelard,
                other => return Err(CliError::at(number, format!("unknown player `{other}` (E or A)"))),
            };
            LineKind::Owner(player, names(number, rest, "owner")?)
        }
        "colour" => {
            let t = exact(number, toks, 2, "colour p n")?;
            let n = t[1]
                .parse()
                .map_err(|_| CliError::at(number, format!("`{}` is not a colour", t[1])))?;
            LineKind::Colour(name(number, t[0])?, n)
        }
        "trans" => {
            let t = exact(number, toks, 3, "trans s A t")?;
            LineKind::Trans {
                from: name(number, t[0])?,
                symbol: name(number, t[1])?,
                to: name(number, t[2])?,
            }
        }
        "alttrans" => {
            const USAGE: &str = "alttrans s A { t... }";
            if toks.len() < 4 || toks[2] != "{" || toks[toks.len() - 1] != "}" {
                return Err(CliError::at(number, format!("malformed transition, expected `{USAGE}`")));
            }
            LineKind::AltTrans {
                from: name(number, toks[0])?,
                symbol: name(number, toks[1])?,
                to: toks[3..toks.len() - 1].iter().map(|t| name(number, t)).collect::<Result<_>>()?,
            }
        }
        "embed" => {
            let t = exact(number, toks, 2, "embed p s")?;
            LineKind::Embed {
                control: name(number, t[0])?,
                state: name(number, t[1])?,
            }
        }
        other => return Err(CliError::at(number, format!("unknown keyword `{other}`"))),
    })
}

/// Splits braces into their own tokens so `{t}` and `{ t }` read alike.
fn tokens(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut rest = word;
        while let Some(i) = rest.find(['{', '}']) {
            if i > 0 {
                out.push(&rest[..i]);
            }
            out.push(&rest[i..i + 1]);
            rest = &rest[i + 1..];
        }
        if !rest.is_empty() {
            out.push(rest);
        }
    }
    out
}

pub fn parse(text: &str) -> Result<InputDocument> {
    let mut doc = InputDocument::default();
    for (i, raw) in text.split('\n').enumerate() {
        let number = i + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        let content = content.split_once('#').map_or(content, |(c, _)| c);
        let toks = tokens(content);
        let Some((&keyword, rest)) = toks.split_first() else { continue };
        let header = match keyword {
            "pds" => Some(BlockKind::Pds),
            "automaton" => Some(BlockKind::Automaton),
            "game" => Some(BlockKind::Game),
            _ => None,
        };
        if let Some(kind) = header {
            if !rest.is_empty() {
                return Err(CliError::at(number, format!("`{keyword}` stands alone on its line")));
            }
            if let Some(prev) = doc.block(kind) {
                return Err(CliError::at(
                    number,
                    format!("duplicate `{keyword}` block (first on line {})", prev.number),
                ));
            }
            doc.blocks.push(Block {
                kind,
                number,
                lines: Vec::new(),
            });
            continue;
        }
        let kind = parse_line(number, keyword, rest)?;
        let Some(block) = doc.blocks.last_mut() else {
            return Err(CliError::at(number, format!("`{keyword}` outside of a block")));
        };
        if !block.kind.allows(&kind) {
            return Err(CliError::at(
                number,
                format!("`{keyword}` is not allowed in a `{}` block", block.kind.keyword()),
            ));
        }
        block.lines.push(Line { number, kind });
    }
    if doc.block(BlockKind::Pds).is_none() {
        return Err(CliError::Invalid("missing `pds` block".into()));
    }
    Ok(doc)
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::States(n) => write!(f, "states {}", n.join(" ")),
            LineKind::Alphabet(n) => write!(f, "alphabet {}", n.join(" ")),
            LineKind::Final(n) => write!(f, "final {}", n.join(" ")),
            LineKind::Bottom(b) => write!(f, "bottom {b}"),
            LineKind::Rule { from, symbol, to, push } => {
                write!(f, "rule {from} {symbol} -> {to}")?;
                for b in push {
                    write!(f, " {b}")?;
                }
                Ok(())
            }
            LineKind::Owner(p, n) => write!(f, "owner {p} {}", n.join(" ")),
            LineKind::Colour(p, c) => write!(f, "colour {p} {c}"),
            LineKind::Trans { from, symbol, to } => write!(f, "trans {from} {symbol} {to}"),
            LineKind::AltTrans { from, symbol, to } => {
                write!(f, "alttrans {from} {symbol} {{")?;
                for t in to {
                    write!(f, " {t}")?;
                }
                write!(f, " }}")
            }
            LineKind::Embed { control, state } => write!(f, "embed {control} {state}"),
        }
    }
}

pub fn serialize(doc: &InputDocument) -> String {
    let mut out = String::new();
    for block in &doc.blocks {
        let _ = writeln!(out, "{}", block.kind.keyword());
        for line in &block.lines {
            let _ = writeln!(out, "  {}", line.kind);
        }
    }
    out
}
