use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::games::Player;
use crate::pds::{Configuration, PushdownSystem};
use crate::sample::stacks_up_to;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_height: usize,
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_height: 6,
            max_nodes: 200_000,
        }
    }
}

impl Limits {
    fn check_height(&self, h: usize) -> Result<()> {
        if h == 0 {
            return invalid("height bound must be at least 1");
        }
        if h > self.max_height {
            return Err(Error::Resource(format!(
                "height bound {h} exceeds the limit of {}",
                self.max_height
            )));
        }
        Ok(())
    }

    fn check_nodes(&self, n: usize) -> Result<()> {
        if n > self.max_nodes {
            return Err(Error::Resource(format!(
                "{n} configurations exceed the node cap of {}",
                self.max_nodes
            )));
        }
        Ok(())
    }
}

/// All configurations with stacks of height at most `h` (bottom counted)
/// plus a sink standing for every configuration above the bound.
#[derive(Debug, Clone)]
pub struct BoundedGraph {
    height: usize,
    nodes: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
    succ: Vec<Vec<usize>>,
    sink_winner: Player,
}

impl BoundedGraph {
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of nodes, the sink included.
    pub fn len(&self) -> usize {
        self.nodes.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sink(&self) -> usize {
        self.nodes.len()
    }

    pub fn sink_winner(&self) -> Player {
        self.sink_winner
    }

    pub fn configuration(&self, node: usize) -> Option<&Configuration> {
        self.nodes.get(node)
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.nodes
    }

    pub fn node(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    /// Non-sink nodes without successors.
    pub fn dead_ends(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.succ[i].is_empty())
    }
}

pub fn bounded_graph(pds: &PushdownSystem, h: usize, sink_winner: Player) -> Result<BoundedGraph> {
    bounded_graph_with(pds, h, sink_winner, &Limits::default())
}

/// Builds the bounded graph; moves that would exceed height `h` lead to the
/// sink, which loops on itself.
pub fn bounded_graph_with(
    pds: &PushdownSystem,
    h: usize,
    sink_winner: Player,
    limits: &Limits,
) -> Result<BoundedGraph> {
    limits.check_height(h)?;
    let letters = pds.num_symbols().saturating_sub(1);
    let per_control: usize = (0..h).map(|k| letters.saturating_pow(k as u32)).sum();
    limits.check_nodes(per_control.saturating_mul(pds.num_controls()))?;
    let stacks = stacks_up_to(pds, h);
    let nodes: Vec<Configuration> = pds
        .controls()
        .flat_map(|c| stacks.iter().map(move |s| Configuration::new(c, s.clone())))
        .collect();
    let index: HashMap<Configuration, usize> = nodes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let sink = nodes.len();
    let mut succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|c| {
            let mut out: Vec<usize> = pds
                .successors(c)
                .iter()
                .map(|d| index.get(d).copied().unwrap_or(sink))
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    succ.push(vec![sink]);
    Ok(BoundedGraph {
        height: h,
        nodes,
        index,
        succ,
        sink_winner,
    })
}

fn reachable_within(pds: &PushdownSystem, from: &Configuration, h: usize) -> Result<HashSet<Configuration>> {
    let limits = Limits::default();
    limits.check_height(h)?;
    pds.check_configuration(from)?;
    if from.stack.len() > h {
        return invalid("start configuration exceeds the height bound");
    }
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(c) = queue.pop_front() {
        for d in pds.successors(&c) {
            if d.stack.len() <= h && seen.insert(d.clone()) {
                limits.check_nodes(seen.len())?;
                queue.push_back(d);
            }
        }
    }
    Ok(seen)
}

/// Whether `c` reaches a configuration satisfying `target` along a path
/// whose stacks all stay within height `h`.
pub fn bfs_prestar_member(
    pds: &PushdownSystem,
    target: impl Fn(&Configuration) -> bool,
    c: &Configuration,
    h: usize,
) -> Result<bool> {
    Ok(reachable_within(pds, c, h)?.iter().any(target))
}

/// Whether `c` is reachable from `from` within height `h`.
pub fn bfs_poststar_member(pds: &PushdownSystem, from: &Configuration, c: &Configuration, h: usize) -> Result<bool> {
    Ok(reachable_within(pds, from, h)?.contains(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_pds;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn push_sys() -> PushdownSystem {
        let mut p = PushdownSystem::from_names(&["p"], &["A", "_"], "_").unwrap();
        p.add_rule_named("p", "_", "p", &["A", "_"]).unwrap();
        p
    }

    #[test]
    fn small_graph() {
        let p = push_sys();
        let g = bounded_graph(&p, 2, Player::Eloise).unwrap();
        assert_eq!(g.len(), 3);
        let bot = g.node(&p.parse_config("p : _").unwrap()).unwrap();
        let top = g.node(&p.parse_config("p : A _").unwrap()).unwrap();
        assert_eq!(g.successors(bot), &[top]);
        assert!(g.successors(top).is_empty());
        assert_eq!(g.successors(g.sink()), &[g.sink()]);
        let g = bounded_graph(&p, 1, Player::Eloise).unwrap();
        assert_eq!(g.successors(0), &[g.sink()]);
    }

    #[test]
    fn limits_enforced() {
        let p = push_sys();
        assert!(matches!(bounded_graph(&p, 7, Player::Eloise), Err(Error::Resource(_))));
        assert!(bounded_graph(&p, 0, Player::Eloise).is_err());
        let tight = Limits {
            max_height: 6,
            max_nodes: 2,
        };
        assert!(matches!(bounded_graph_with(&p, 3, Player::Eloise, &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn edges_follow_successors() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..50 {
            let p = random_pds(&mut rng, 3, 2, 6);
            let g = bounded_graph(&p, 3, Player::Abelard).unwrap();
            for (i, c) in g.configurations().iter().enumerate() {
                let expected: HashSet<usize> = p
                    .successors(c)
                    .iter()
                    .map(|d| g.node(d).unwrap_or(g.sink()))
                    .collect();
                let got: HashSet<usize> = g.successors(i).iter().copied().collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn bfs_examples() {
        let mut p = PushdownSystem::from_names(&["p", "q"], &["A", "_"], "_").unwrap();
        p.add_rule_named("p", "A", "q", &[]).unwrap();
        let c = p.parse_config("p : A _").unwrap();
        let t = p.parse_config("q : _").unwrap();
        assert!(bfs_prestar_member(&p, |d| *d == c, &c, 1).is_err());
        assert!(bfs_prestar_member(&p, |d| *d == c, &c, 2).unwrap());
        assert!(bfs_prestar_member(&p, |d| *d == t, &c, 2).unwrap());
        assert!(!bfs_prestar_member(&p, |d| *d == c, &t, 2).unwrap());
        assert!(bfs_poststar_member(&p, &c, &t, 2).unwrap());
    }
}
