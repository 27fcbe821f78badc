use std::collections::HashMap;
use std::time::Instant;

use crate::automaton::{Dpa, Nba};
use crate::det::config::{DetConfig, Limits};
use crate::det::macrostate::Macrostate;
use crate::det::successor::{DetContext, Target};
use crate::error::{Error, Result};
use crate::stateset::StateSet;
use crate::trie::SuccessorTrie;

/// A state of the explored graph.
pub type Node = Target;

/// Outgoing transition of an explored state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Edge {
    To(usize, u32),
    /// Left the explored region; carries the powerset successor.
    Hole(StateSet),
}

/// Explored part of the determinized automaton.
#[derive(Clone, Debug)]
pub struct Explored {
    pub nodes: Vec<Node>,
    /// Powerset node of the first path that reached each state.
    pub tags: Vec<StateSet>,
    /// Indexed `state * |Σ| + symbol`.
    pub edges: Vec<Edge>,
    pub num_symbols: usize,
}

impl Explored {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge(&self, state: usize, sym: usize) -> &Edge {
        &self.edges[state * self.num_symbols + sym]
    }

    /// The DPA; panics if a hole is left.
    pub fn to_dpa(&self, nba: &Nba) -> Dpa {
        let mut dpa = Dpa::new(self.len(), nba.alphabet().clone(), 0);
        for p in 0..self.len() {
            for a in 0..self.num_symbols {
                match self.edge(p, a) {
                    Edge::To(q, pr) => dpa.set_edge(p, a, *q, *pr),
                    Edge::Hole(_) => panic!("unresolved hole at state {p}"),
                }
            }
        }
        dpa
    }
}

struct Interner {
    nodes: Vec<Node>,
    tags: Vec<StateSet>,
    index: HashMap<(Node, Option<StateSet>), usize>,
    tagged: bool,
}

impl Interner {
    fn get_or_add(&mut self, node: Node, tag: &StateSet, limits: &Limits) -> Result<usize> {
        let key = (node, self.tagged.then(|| tag.clone()));
        if let Some(id) = self.index.get(&key) {
            return Ok(*id);
        }
        if self.nodes.len() >= limits.state_cap {
            return Err(Error::CapExceeded(limits.state_cap));
        }
        let id = self.nodes.len();
        self.nodes.push(key.0.clone());
        self.index.insert(key, id);
        self.tags.push(tag.clone());
        Ok(id)
    }
}

/// Breadth-first exploration from `start` (tagged `start_tag`). Transitions
/// whose powerset successor fails `inside` become holes. With `tagged`, states
/// are told apart by their powerset tag as well as by their macrostate.
pub fn explore(
    ctx: &DetContext,
    start: Target,
    start_tag: &StateSet,
    inside: &dyn Fn(&StateSet) -> bool,
    tagged: bool,
    limits: &Limits,
) -> Result<Explored> {
    let nba = &ctx.nba;
    let syms = nba.num_symbols();
    // one trie per tag when states are told apart by tag
    let mut tries: HashMap<Option<StateSet>, SuccessorTrie> = HashMap::new();
    let smart = ctx.config.smart_successors;
    let n = nba.num_states();
    let tkey = |tag: &StateSet| tagged.then(|| tag.clone());
    let mut int = Interner {
        nodes: Vec::new(),
        tags: Vec::new(),
        index: HashMap::new(),
        tagged,
    };
    let first = int.get_or_add(start, start_tag, limits)?;
    if let (true, Node::Macro(m)) = (smart, &int.nodes[first]) {
        tries.entry(tkey(start_tag)).or_insert_with(|| SuccessorTrie::new(n)).insert(m, first);
    }
    let mut edges = Vec::new();
    let mut i = 0;
    while i < int.nodes.len() {
        if i % 256 == 0 {
            if let Some(d) = limits.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
        }
        let node = int.nodes[i].clone();
        let tag = int.tags[i].clone();
        for a in 0..syms {
            let next_tag = nba.post(&tag, a);
            let ms = match &node {
                Node::AccSink => {
                    edges.push(Edge::To(i, 0));
                    continue;
                }
                Node::Macro(m) if m.is_empty() => {
                    edges.push(Edge::To(i, 1));
                    continue;
                }
                Node::Macro(m) => m,
            };
            if !inside(&next_tag) {
                edges.push(Edge::Hole(next_tag));
                continue;
            }
            let Some(t) = ctx.transition(ms, a) else {
                let id = int.get_or_add(Node::AccSink, &next_tag, limits)?;
                edges.push(Edge::To(id, 0));
                continue;
            };
            let k_eff = if t.signals.good.is_empty() && t.signals.bad.is_empty() {
                u32::MAX
            } else {
                t.k
            };
            let found = if smart {
                tries.get(&tkey(&next_tag)).and_then(|tr| tr.find(&t.unmerged, k_eff))
            } else {
                None
            };
            if let Some(found) = found {
                edges.push(Edge::To(found, t.priority));
                continue;
            }
            let m = t.merged;
            let key = smart.then(|| m.clone());
            debug_assert_eq!(ctx.check(&m), Ok(()), "invariant broken in {m}");
            let id = int.get_or_add(Node::Macro(m), &next_tag, limits)?;
            if let Some(key) = key {
                tries.entry(tkey(&next_tag)).or_insert_with(|| SuccessorTrie::new(n)).insert(&key, id);
            }
            edges.push(Edge::To(id, t.priority));
        }
        i += 1;
    }
    Ok(Explored {
        nodes: int.nodes,
        tags: int.tags,
        edges,
        num_symbols: syms,
    })
}

/// Result of a plain (non-topological) determinization.
#[derive(Clone, Debug)]
pub struct Determinized {
    pub dpa: Dpa,
    pub explored: Explored,
}

/// Explores the whole macrostate space from the initial macrostate.
pub fn determinize_plain(nba: &Nba, config: &DetConfig, limits: &Limits) -> Result<Determinized> {
    let ctx = DetContext::new(nba, config);
    let start = ctx.initial_macrostate(nba.initial());
    let explored = explore(&ctx, start, nba.initial(), &|_| true, false, limits)?;
    Ok(Determinized {
        dpa: explored.to_dpa(nba),
        explored,
    })
}

/// Macrostate of every explored state, `None` for the accepting sink.
pub fn macrostates(explored: &Explored) -> Vec<Option<&Macrostate>> {
    explored
        .nodes
        .iter()
        .map(|n| match n {
            Node::Macro(m) => Some(m),
            Node::AccSink => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det::config::MergeStrategy;
    use crate::fixtures::{ex_a1, SYM_A, SYM_B};

    #[test]
    fn ex_a1_is_two_states() {
        for merge in MergeStrategy::ALL {
            let d = determinize_plain(&ex_a1(), &DetConfig::default().with_merge(merge), &Limits::default()).unwrap();
            let dpa = &d.dpa;
            assert_eq!(dpa.num_states(), 2);
            assert_eq!(dpa.distinct_priorities(), vec![3, 4, 5]);
            assert_eq!((dpa.succ(0, SYM_A), dpa.priority(0, SYM_A)), (1, 5));
            assert_eq!((dpa.succ(0, SYM_B), dpa.priority(0, SYM_B)), (0, 5));
            assert_eq!((dpa.succ(1, SYM_A), dpa.priority(1, SYM_A)), (1, 4));
            assert_eq!((dpa.succ(1, SYM_B), dpa.priority(1, SYM_B)), (0, 3));
        }
    }

    #[test]
    fn empty_language_gives_rejecting_sink() {
        let nba = Nba::new(0, crate::automaton::Alphabet::with_aps(1));
        let d = determinize_plain(&nba, &DetConfig::default(), &Limits::default()).unwrap();
        assert_eq!(d.dpa.num_states(), 1);
        assert!(d.dpa.priorities().iter().all(|p| p % 2 == 1));
    }

    #[test]
    fn cap_is_enforced() {
        let r = determinize_plain(&ex_a1(), &DetConfig::default(), &Limits::with_cap(1));
        assert_eq!(r.unwrap_err(), Error::CapExceeded(1));
    }
}
