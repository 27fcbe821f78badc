//! Structural analysis of Büchi automata: SCC classification, trimming,
//! true-loop detection and direct simulation.

use crate::automaton::Nba;
use crate::graph::{self, tarjan};
use crate::stateset::StateSet;

/// Classification of an SCC of a Büchi automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SccKind {
    /// A single state without a self-loop.
    Trivial,
    /// Nontrivial and free of accepting states.
    Rejecting,
    /// Nontrivial and every cycle inside visits an accepting state.
    Accepting,
    Mixed,
}

impl SccKind {
    /// Rejecting in the broad sense: no accepting run can stay here.
    pub fn is_rejecting(self) -> bool {
        matches!(self, SccKind::Trivial | SccKind::Rejecting)
    }
}

#[derive(Clone, Debug)]
pub struct SccInfo {
    pub scc_of: Vec<usize>,
    pub members: Vec<StateSet>,
    pub topo_order: Vec<usize>,
    pub kind: Vec<SccKind>,
    pub deterministic: Vec<bool>,
}

impl SccInfo {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Weak: every SCC is accepting or rejecting.
    pub fn is_weak(&self) -> bool {
        self.kind.iter().all(|k| *k != SccKind::Mixed)
    }

    /// Union of all SCCs satisfying `pred`.
    pub fn states_where(&self, n: usize, mut pred: impl FnMut(usize) -> bool) -> StateSet {
        let mut out = StateSet::empty(n);
        for c in 0..self.len() {
            if pred(c) {
                out.union_with(&self.members[c]);
            }
        }
        out
    }
}

pub fn analyze_sccs(nba: &Nba) -> SccInfo {
    let n = nba.num_states();
    let sccs = tarjan(n, |p| nba.post_any(p).iter().collect::<Vec<_>>());
    let members: Vec<StateSet> = sccs
        .members
        .iter()
        .map(|m| StateSet::from_iter_in(n, m.iter().copied()))
        .collect();
    let mut kind = Vec::with_capacity(members.len());
    let mut deterministic = Vec::with_capacity(members.len());
    for c in &members {
        let trivial = c.len() == 1 && {
            let q = c.min().unwrap();
            !nba.post_any(q).contains(q)
        };
        let k = if trivial {
            SccKind::Trivial
        } else if !c.intersects(nba.accepting()) {
            SccKind::Rejecting
        } else if acyclic_within(nba, &c.difference(nba.accepting())) {
            SccKind::Accepting
        } else {
            SccKind::Mixed
        };
        kind.push(k);
        deterministic.push(
            c.iter()
                .all(|p| nba.alphabet().symbols().all(|a| nba.succ(p, a).intersection(c).len() <= 1)),
        );
    }
    SccInfo {
        scc_of: sccs.scc_of,
        members,
        topo_order: sccs.topo_order,
        kind,
        deterministic,
    }
}

/// Whether the subgraph induced by `within` has no cycle.
fn acyclic_within(nba: &Nba, within: &StateSet) -> bool {
    let n = nba.num_states();
    let sub = tarjan(n, |p| {
        if within.contains(p) {
            nba.post_any(p).intersection(within).iter().collect::<Vec<_>>()
        } else {
            Vec::new()
        }
    });
    sub.members.iter().all(|m| {
        m.len() == 1 && {
            let q = m[0];
            !(within.contains(q) && nba.post_any(q).contains(q))
        }
    })
}

/// Removes states that are unreachable or cannot reach an accepting cycle.
pub fn trim(nba: &Nba) -> Nba {
    let n = nba.num_states();
    let fwd = graph::reachable(n, nba.initial().iter(), |p| nba.post_any(p).iter().collect::<Vec<_>>());
    let info = analyze_sccs(nba);
    // accepting states lying on some cycle
    let good: Vec<usize> = nba
        .accepting()
        .iter()
        .filter(|q| info.kind[info.scc_of[*q]] != SccKind::Trivial)
        .collect();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, _, q) in nba.edges() {
        pred[q].push(p);
    }
    for l in &mut pred {
        l.dedup();
    }
    let bwd = graph::reachable(n, good, |q| pred[q].clone());
    let keep = StateSet::from_iter_in(n, (0..n).filter(|q| fwd[*q] && bwd[*q]));
    nba.restrict(&keep)
}

/// Accepting states with a self-loop on every symbol.
pub fn true_loop_states(nba: &Nba) -> StateSet {
    let n = nba.num_states();
    StateSet::from_iter_in(
        n,
        nba.accepting()
            .iter()
            .filter(|q| nba.alphabet().symbols().all(|a| nba.succ(*q, a).contains(*q))),
    )
}

/// Direct simulation preorder; `(p, q)` stored means `q` simulates `p`,
/// hence `L(p) ⊆ L(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationRelation {
    n: usize,
    /// `simulators[p]` = all `q` with `(p, q)` in the relation.
    simulators: Vec<StateSet>,
}

impl SimulationRelation {
    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.simulators[p].contains(q)
    }

    pub fn simulators(&self, p: usize) -> &StateSet {
        &self.simulators[p]
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |p| self.simulators[p].iter().map(move |q| (p, q)))
    }

    /// The identity relation.
    pub fn identity(n: usize) -> Self {
        SimulationRelation {
            n,
            simulators: (0..n).map(|p| StateSet::singleton(n, p)).collect(),
        }
    }
}

/// Greatest direct simulation, refined from `{(p,q) : p ∈ F ⇒ q ∈ F}`.
pub fn compute_direct_simulation(nba: &Nba) -> SimulationRelation {
    let n = nba.num_states();
    let mut sim: Vec<StateSet> = (0..n)
        .map(|p| {
            if nba.is_accepting(p) {
                nba.accepting().clone()
            } else {
                StateSet::full(n)
            }
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            let candidates: Vec<usize> = sim[p].iter().collect();
            for q in candidates {
                if p == q {
                    continue;
                }
                let ok = nba.alphabet().symbols().all(|a| {
                    nba.succ(p, a)
                        .iter()
                        .all(|p2| nba.succ(q, a).iter().any(|q2| sim[p2].contains(q2)))
                });
                if !ok {
                    sim[p].remove(q);
                    changed = true;
                }
            }
        }
    }
    SimulationRelation { n, simulators: sim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex_a1, ex_a2};

    #[test]
    fn ex_a1_sccs() {
        let info = analyze_sccs(&ex_a1());
        assert_eq!(info.len(), 2);
        let k0 = info.kind[info.scc_of[0]];
        let k1 = info.kind[info.scc_of[1]];
        assert_eq!(k0, SccKind::Rejecting);
        assert_eq!(k1, SccKind::Accepting);
        assert!(info.deterministic.iter().all(|d| *d));
        assert!(info.is_weak());
        // {0} reaches {1}
        let pos = |c: usize| info.topo_order.iter().position(|x| *x == c).unwrap();
        assert!(pos(info.scc_of[0]) < pos(info.scc_of[1]));
    }

    #[test]
    fn scc_kinds_small_cases() {
        use crate::automaton::Alphabet;
        let mut one = Nba::new(1, Alphabet::with_aps(1));
        one.add_edge(0, 0, 0);
        one.add_initial(0);
        assert_eq!(analyze_sccs(&one).kind[0], SccKind::Rejecting);

        // 0 <-> 1 with only 1 accepting: every cycle passes 1
        let mut two = Nba::new(2, Alphabet::with_aps(1));
        two.add_edge(0, 0, 1);
        two.add_edge(1, 0, 0);
        two.set_accepting(1, true);
        assert_eq!(analyze_sccs(&two).kind[0], SccKind::Accepting);
        // add a self-loop on the non-accepting state: now mixed
        two.add_edge(0, 1, 0);
        assert_eq!(analyze_sccs(&two).kind[0], SccKind::Mixed);

        let mut triv = Nba::new(1, Alphabet::with_aps(1));
        triv.set_accepting(0, true);
        assert_eq!(analyze_sccs(&triv).kind[0], SccKind::Trivial);
    }

    #[test]
    fn trim_cases() {
        let a1 = ex_a1();
        assert_eq!(trim(&a1), a1);

        use crate::automaton::Alphabet;
        let mut ext = Nba::new(3, a1.alphabet().clone());
        for (p, a, q) in a1.edges() {
            ext.add_edge(p, a, q);
        }
        ext.add_initial(0);
        ext.set_accepting(1, true);
        ext.add_edge(2, 0, 2); // unreachable
        assert_eq!(trim(&ext), a1);

        // accepting state only in a trivial SCC: empty language
        let mut dead = Nba::new(2, Alphabet::with_aps(1));
        dead.add_initial(0);
        dead.add_edge(0, 0, 1);
        dead.set_accepting(1, true);
        assert_eq!(trim(&dead).num_states(), 0);
    }

    #[test]
    fn true_loops() {
        let mut a = ex_a1();
        assert!(true_loop_states(&a).is_empty());
        a.add_edge(1, 1, 1);
        assert_eq!(true_loop_states(&a).iter().collect::<Vec<_>>(), vec![1]);
        // a non-accepting state with all self-loops does not count
        assert!(!true_loop_states(&a).contains(0));
    }

    #[test]
    fn simulation_on_fixtures() {
        let s2 = compute_direct_simulation(&ex_a2());
        assert!(s2.contains(1, 2) && s2.contains(2, 1));
        let s1 = compute_direct_simulation(&ex_a1());
        assert!(!s1.contains(1, 0));
        for p in 0..2 {
            assert!(s1.contains(p, p));
        }
    }
}
