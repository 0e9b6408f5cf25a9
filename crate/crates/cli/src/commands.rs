use pdsat::automata::AltAutomaton;
use pdsat::derivation::deriv_relation;
use pdsat::games::{solve_buchi_game, solve_parity_game, solve_reachability_game, PushdownGame, RegionAutomaton};
use pdsat::oracle::{bfs_poststar_member, bfs_prestar_member, bracket_region};
use pdsat::pds::{Configuration, PushdownSystem};
use pdsat::reachability::{poststar, prestar, PAutomaton};
use pdsat::sample::stacks_up_to;
use pdsat::State;

use crate::build::{build_alternating, build_game, build_pautomaton, build_pds, GameKind};
use crate::doc::{parse, InputDocument};
use crate::error::{CliError, Result};
use crate::render::{render_pautomaton, render_region, render_relation, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Prestar,
    Poststar,
    Deriv,
    Reachgame,
    Buchigame,
    Paritygame,
    Member,
}

/// What `member` tests against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum MemberOf {
    /// The input automaton itself.
    Automaton,
    #[default]
    Prestar,
    Poststar,
    Reachgame,
    Buchigame,
    Paritygame,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub format: Format,
    pub config: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub oracle_check: Option<usize>,
    pub of: MemberOf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub code: i32,
}

enum Computed {
    Automaton(PAutomaton),
    Region(RegionAutomaton),
    Alternating(AltAutomaton, Vec<State>),
}

impl Computed {
    fn member(&self, c: &Configuration) -> Result<bool> {
        Ok(match self {
            Computed::Automaton(a) => a.accepts(c)?,
            Computed::Region(r) => r.member(c)?,
            Computed::Alternating(aut, embed) => aut.accepts(embed[c.control.index()], &c.stack)?,
        })
    }
}

/// A P-automaton from the input, repaired if it has transitions into or
/// final entry states.
fn input_pautomaton(doc: &InputDocument, pds: &PushdownSystem, notes: &mut Vec<String>) -> Result<PAutomaton> {
    let (a, fixes) = build_pautomaton(doc, pds)?.normalized();
    notes.extend(fixes.into_iter().map(|f| format!("note: {f}")));
    Ok(a)
}

fn solve(game: &PushdownGame, kind: GameKind) -> Result<RegionAutomaton> {
    Ok(match kind {
        GameKind::Reachability => solve_reachability_game(game)?,
        GameKind::Buchi => solve_buchi_game(game)?,
        GameKind::Parity => solve_parity_game(game)?,
    })
}

fn disagreement(pds: &PushdownSystem, c: &Configuration, detail: String) -> CliError {
    CliError::Disagreement {
        config: pds.format_config(c),
        detail,
    }
}

/// Checks a game region against the truncated-game brackets of height `h`.
fn check_game(game: &PushdownGame, region: &RegionAutomaton, h: usize) -> Result<String> {
    let b = bracket_region(game, h)?;
    for c in b.configurations() {
        let m = region.member(c)?;
        let (u, o) = (b.under(c).unwrap_or(false), b.over(c).unwrap_or(true));
        if (u && !m) || (m && !o) {
            return Err(disagreement(
                game.pds(),
                c,
                format!("saturation says {m}, brackets are [{u}, {o}]"),
            ));
        }
    }
    Ok(format!("bracket agreement on {} nodes", b.configurations().len()))
}

fn configs(pds: &PushdownSystem, h: usize) -> Vec<Configuration> {
    let stacks = stacks_up_to(pds, h);
    pds.controls()
        .flat_map(|c| stacks.iter().map(move |s| Configuration::new(c, s.clone())))
        .collect()
}

fn check_prestar(pds: &PushdownSystem, input: &PAutomaton, out: &PAutomaton, h: usize) -> Result<String> {
    let cs = configs(pds, h);
    for c in &cs {
        let hit = |d: &Configuration| input.accepts(d).unwrap_or(false);
        if bfs_prestar_member(pds, hit, c, h)? && !out.accepts(c)? {
            return Err(disagreement(pds, c, "reaches the target within the bound but is rejected".into()));
        }
    }
    Ok(format!("bounded search agreement on {} configurations", cs.len()))
}

fn check_poststar(pds: &PushdownSystem, input: &PAutomaton, out: &PAutomaton, h: usize) -> Result<String> {
    let cs = configs(pds, h);
    let mut starts = Vec::new();
    for c in &cs {
        if input.accepts(c)? {
            starts.push(c);
        }
    }
    for c in &cs {
        if out.accepts(c)? {
            continue;
        }
        for s in &starts {
            if bfs_poststar_member(pds, s, c, h)? {
                return Err(disagreement(
                    pds,
                    c,
                    format!("reachable from {} within the bound but rejected", pds.format_config(s)),
                ));
            }
        }
    }
    Ok(format!("bounded search agreement on {} configurations", cs.len()))
}

fn game_kind(command: Command, of: MemberOf) -> Option<GameKind> {
    match (command, of) {
        (Command::Reachgame, _) | (Command::Member, MemberOf::Reachgame) => Some(GameKind::Reachability),
        (Command::Buchigame, _) | (Command::Member, MemberOf::Buchigame) => Some(GameKind::Buchi),
        (Command::Paritygame, _) | (Command::Member, MemberOf::Paritygame) => Some(GameKind::Parity),
        _ => None,
    }
}

/// Runs `command` on the document text. Errors map to exit codes through
/// [`CliError::exit_code`].
pub fn execute(command: Command, opts: &Options, input: &str) -> Result<Outcome> {
    let doc = parse(input)?;
    let pds = build_pds(&doc)?;
    let mut out = Outcome::default();

    if command == Command::Deriv {
        if opts.oracle_check.is_some() {
            return Err(CliError::Invalid("--oracle-check is not available for deriv".into()));
        }
        let control = |flag: &str, v: &Option<String>| -> Result<_> {
            let name = v
                .as_deref()
                .ok_or_else(|| CliError::Invalid(format!("deriv needs --{flag}")))?;
            Ok(pds.control(name)?)
        };
        let rel = deriv_relation(&pds, control("from", &opts.from)?, control("to", &opts.to)?)?;
        out.stdout = render_relation(&pds, &rel, opts.format);
        return Ok(out);
    }

    let computed = if let Some(kind) = game_kind(command, opts.of) {
        let game = build_game(&doc, &pds, kind)?;
        let region = solve(&game, kind)?;
        if let Some(h) = opts.oracle_check {
            out.stderr.push(check_game(&game, &region, h)?);
        }
        Computed::Region(region)
    } else {
        match (command, opts.of) {
            (Command::Prestar, _) | (Command::Member, MemberOf::Prestar) => {
                let a = input_pautomaton(&doc, &pds, &mut out.stderr)?;
                let r = prestar(&pds, &a)?;
                if let Some(h) = opts.oracle_check {
                    out.stderr.push(check_prestar(&pds, &a, &r, h)?);
                }
                Computed::Automaton(r)
            }
            (Command::Poststar, _) | (Command::Member, MemberOf::Poststar) => {
                let a = input_pautomaton(&doc, &pds, &mut out.stderr)?;
                let r = poststar(&pds, &a)?;
                if let Some(h) = opts.oracle_check {
                    out.stderr.push(check_poststar(&pds, &a, &r, h)?);
                }
                Computed::Automaton(r)
            }
            _ => {
                if opts.oracle_check.is_some() {
                    return Err(CliError::Invalid("--oracle-check needs a computed automaton".into()));
                }
                let (aut, embed) = build_alternating(&doc, &pds)?;
                Computed::Alternating(aut, embed)
            }
        }
    };

    if command == Command::Member {
        let text = opts
            .config
            .as_deref()
            .ok_or_else(|| CliError::Invalid("member needs --config".into()))?;
        let c = pds.parse_config(text)?;
        let yes = computed.member(&c)?;
        out.stdout = if yes { "yes\n" } else { "no\n" }.to_string();
        out.code = if yes { 0 } else { 1 };
        return Ok(out);
    }
    out.stdout = match &computed {
        Computed::Automaton(a) => render_pautomaton(&pds, a, opts.format),
        Computed::Region(r) => render_region(&pds, r, opts.format),
        Computed::Alternating(..) => unreachable!("only member reads the input automaton as is"),
    };
    Ok(out)
}
