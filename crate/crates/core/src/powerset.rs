//! Subset-construction graph of a Büchi automaton.

use std::collections::HashMap;

use crate::automaton::Nba;
use crate::graph::{tarjan, Sccs};
use crate::stateset::StateSet;

/// Deterministic subset graph reachable from `Q₀`; `∅` is an explicit sink
/// when reachable.
#[derive(Clone, Debug)]
pub struct PowersetStructure {
    pub nodes: Vec<StateSet>,
    index: HashMap<StateSet, usize>,
    delta: Vec<usize>,
    num_symbols: usize,
    pub initial: usize,
    pub scc: Sccs,
}

impl PowersetStructure {
    pub fn succ(&self, node: usize, sym: usize) -> usize {
        self.delta[node * self.num_symbols + sym]
    }

    pub fn node_of(&self, set: &StateSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in BFS discovery order from the initial node (node ids are
    /// assigned in that order).
    pub fn bfs_order(&self) -> std::ops::Range<usize> {
        0..self.nodes.len()
    }
}

pub fn build_powerset_structure(nba: &Nba) -> PowersetStructure {
    let syms = nba.num_symbols();
    let mut nodes = vec![nba.initial().clone()];
    let mut index = HashMap::new();
    index.insert(nba.initial().clone(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        for a in 0..syms {
            let next = nba.post(&nodes[i], a);
            let id = match index.get(&next) {
                Some(id) => *id,
                None => {
                    nodes.push(next.clone());
                    index.insert(next, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let scc = tarjan(nodes.len(), |v| (0..syms).map(|a| delta[v * syms + a]).collect::<Vec<_>>());
    PowersetStructure {
        nodes,
        index,
        delta,
        num_symbols: syms,
        initial: 0,
        scc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex_a1, SYM_A, SYM_B};

    #[test]
    fn ex_a1_powerset() {
        let nba = ex_a1();
        let ps = build_powerset_structure(&nba);
        let s0 = StateSet::from_iter_in(2, [0]);
        let s01 = StateSet::from_iter_in(2, [0, 1]);
        assert_eq!(ps.nodes, vec![s0.clone(), s01.clone()]);
        let (n0, n01) = (ps.node_of(&s0).unwrap(), ps.node_of(&s01).unwrap());
        assert_eq!(ps.succ(n0, SYM_A), n01);
        assert_eq!(ps.succ(n0, SYM_B), n0);
        assert_eq!(ps.succ(n01, SYM_A), n01);
        assert_eq!(ps.succ(n01, SYM_B), n0);
        assert_eq!(ps.scc.len(), 1);
    }

    #[test]
    fn empty_sink_is_explicit() {
        use crate::automaton::Alphabet;
        let mut nba = Nba::new(1, Alphabet::with_aps(1));
        nba.add_initial(0);
        nba.add_edge(0, 0, 0);
        let ps = build_powerset_structure(&nba);
        let empty = ps.node_of(&StateSet::empty(1)).unwrap();
        assert_eq!(ps.succ(empty, 0), empty);
        assert_eq!(ps.succ(empty, 1), empty);
        assert!(ps.len() <= 2);
    }
}
