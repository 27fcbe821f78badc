//! Determinization per powerset SCC, keeping one bottom SCC of each fragment.

use std::collections::HashMap;

use crate::automaton::{Dpa, Nba};
use crate::det::config::{DetConfig, Limits};
use crate::det::explore::{explore, Edge, Explored, Node};
use crate::det::successor::DetContext;
use crate::error::Result;
use crate::graph::tarjan;
use crate::powerset::{build_powerset_structure, PowersetStructure};
use crate::stateset::StateSet;

/// States of `frag` forming the kept bottom SCC, in increasing order.
pub fn select_kept_bottom(frag: &Explored, greedy: bool) -> Vec<usize> {
    let n = frag.len();
    let syms = frag.num_symbols;
    let internal = |v: usize| {
        (0..syms).filter_map(move |a| match frag.edge(v, a) {
            Edge::To(q, _) => Some(*q),
            Edge::Hole(_) => None,
        })
    };
    let sccs = tarjan(n, |v| internal(v).collect::<Vec<_>>());
    if greedy {
        return sccs.members[0].clone();
    }
    let bottom = |c: usize| {
        sccs.members[c]
            .iter()
            .all(|&v| internal(v).all(|q| sccs.scc_of[q] == c))
    };
    (0..sccs.len())
        .filter(|&c| bottom(c))
        .min_by_key(|&c| (sccs.members[c].len(), sccs.members[c][0]))
        .map(|c| sccs.members[c].clone())
        .expect("a finite graph has a bottom SCC")
}

/// Outcome of the topological construction.
#[derive(Clone, Debug)]
pub struct TopoResult {
    pub dpa: Dpa,
    pub powerset_sccs: usize,
    /// Size of the unrestricted exploration used to pick start macrostates.
    pub plain_states: usize,
    /// Whether the unrestricted exploration was returned because it was smaller.
    pub used_plain: bool,
}

/// With smart successors the kept bottom SCCs can come out larger than
/// without them, so both are built and the smaller result is returned.
pub fn determinize_topo(nba: &Nba, config: &DetConfig, limits: &Limits) -> Result<TopoResult> {
    let res = topo_once(nba, config, limits)?;
    if !config.smart_successors {
        return Ok(res);
    }
    let without = DetConfig {
        smart_successors: false,
        ..config.clone()
    };
    let other = topo_once(nba, &without, limits)?;
    Ok(if other.dpa.num_states() < res.dpa.num_states() { other } else { res })
}

fn topo_once(nba: &Nba, config: &DetConfig, limits: &Limits) -> Result<TopoResult> {
    let ctx = DetContext::new(nba, config);
    let ps = build_powerset_structure(nba);
    let plain = explore(&ctx, ctx.initial_macrostate(nba.initial()), nba.initial(), &|_| true, false, limits)?;
    let n = nba.num_states();
    let sentinel = 2 * (n as u32 + 1) - 1;

    // first plain state per powerset node, in exploration order
    let mut first_of: HashMap<usize, usize> = HashMap::new();
    for (id, tag) in plain.tags.iter().enumerate() {
        let node = ps.node_of(tag).expect("tags are powerset nodes");
        first_of.entry(node).or_insert(id);
    }

    let mut asm = Assembly::default();
    let mut reps: Vec<Option<usize>> = vec![None; ps.len()];
    // completion order of Tarjan is reverse topological
    for c in 0..ps.scc.len() {
        let members = &ps.scc.members[c];
        // the first node of C in breadth-first order, and the macrostate the
        // unrestricted exploration first entered C with
        let mut starts = vec![(ctx.initial_macrostate(&ps.nodes[members[0]]), ps.nodes[members[0]].clone())];
        if let Some(id) = members.iter().filter_map(|p| first_of.get(p)).min() {
            starts.push((plain.nodes[*id].clone(), plain.tags[*id].clone()));
        }
        let inside = |s: &StateSet| ps.node_of(s).is_some_and(|p| ps.scc.scc_of[p] == c);
        let mut best: Option<(Explored, Vec<usize>, Vec<Vec<usize>>)> = None;
        for (start, tag) in starts {
            let (frag, kept, tags) = fragment(&ctx, start, &tag, &inside, &ps, members, limits)?;
            if best.as_ref().is_none_or(|b| kept.len() < b.1.len()) {
                best = Some((frag, kept, tags));
            }
        }
        let (frag, kept, tags) = best.expect("at least one start");
        let base = asm.add(&frag, &kept, &ps);
        for (&old, &new) in kept.iter().zip(base.iter()) {
            for &p in &tags[old] {
                reps[p].get_or_insert(new);
            }
        }
        let sink = kept.iter().zip(&base).find(|(o, _)| frag.nodes[**o] == Node::AccSink);
        for &p in members {
            if reps[p].is_none() {
                let (_, &s) = sink.expect("uncovered powerset node outside a universal SCC");
                reps[p] = Some(s);
            }
        }
    }

    let mut dpa = Dpa::new(asm.len(), nba.alphabet().clone(), reps[ps.initial].expect("initial node"));
    let syms = nba.num_symbols();
    for (s, row) in asm.edges.iter().enumerate() {
        for (a, e) in row.iter().enumerate().take(syms) {
            match e {
                AsmEdge::To(q, pr) => dpa.set_edge(s, a, *q, *pr),
                AsmEdge::Hole(p) => dpa.set_edge(s, a, reps[*p].expect("processed bottom-up"), sentinel),
            }
        }
    }
    let dpa = dpa.reachable_part();
    debug_assert!(scc_count(&dpa) <= ps.scc.len());
    let plain_dpa = plain.to_dpa(nba);
    let used_plain = plain_dpa.num_states() < dpa.num_states();
    Ok(TopoResult {
        dpa: if used_plain { plain_dpa } else { dpa },
        powerset_sccs: ps.scc.len(),
        plain_states: plain.len(),
        used_plain,
    })
}

/// Explores the fragment of one powerset SCC and selects its kept states,
/// falling back to tag-separated states when the kept part would not cover
/// every node.
fn fragment(
    ctx: &DetContext,
    start: Node,
    tag: &StateSet,
    inside: &dyn Fn(&StateSet) -> bool,
    ps: &PowersetStructure,
    members: &[usize],
    limits: &Limits,
) -> Result<(Explored, Vec<usize>, Vec<Vec<usize>>)> {
    let greedy = ctx.config.greedy_bottom;
    let frag = explore(ctx, start.clone(), tag, inside, false, limits)?;
    let kept = select_kept_bottom(&frag, greedy);
    let tags = tag_closure(&frag, ps, inside, &ctx.nba);
    if covers(&frag, &kept, &tags, members) {
        return Ok((frag, kept, tags));
    }
    let frag = explore(ctx, start, tag, inside, true, limits)?;
    let kept = select_kept_bottom(&frag, greedy);
    let tags = tag_closure(&frag, ps, inside, &ctx.nba);
    Ok((frag, kept, tags))
}

/// Every powerset node each fragment state is known to be equivalent to: the
/// exploration tag, closed under internal transitions.
fn tag_closure(frag: &Explored, ps: &PowersetStructure, inside: &dyn Fn(&StateSet) -> bool, nba: &Nba) -> Vec<Vec<usize>> {
    let mut tags: Vec<Vec<usize>> = frag
        .tags
        .iter()
        .map(|t| vec![ps.node_of(t).expect("tag in powerset")])
        .collect();
    let mut work: Vec<(usize, usize)> = tags.iter().enumerate().map(|(v, t)| (v, t[0])).collect();
    while let Some((v, p)) = work.pop() {
        if frag.nodes[v] == Node::AccSink {
            continue;
        }
        for a in 0..frag.num_symbols {
            let Edge::To(w, _) = frag.edge(v, a) else { continue };
            let next = nba.post(&ps.nodes[p], a);
            if !inside(&next) {
                continue;
            }
            let q = ps.node_of(&next).expect("powerset is closed");
            if !tags[*w].contains(&q) {
                tags[*w].push(q);
                work.push((*w, q));
            }
        }
    }
    tags
}

/// Whether the kept states represent every node of the SCC.
fn covers(frag: &Explored, kept: &[usize], tags: &[Vec<usize>], members: &[usize]) -> bool {
    if kept.iter().any(|&s| frag.nodes[s] == Node::AccSink) {
        return true;
    }
    members.iter().all(|p| kept.iter().any(|&s| tags[s].contains(p)))
}

enum AsmEdge {
    To(usize, u32),
    Hole(usize),
}

#[derive(Default)]
struct Assembly {
    edges: Vec<Vec<AsmEdge>>,
    acc_sink: Option<usize>,
}

impl Assembly {
    fn len(&self) -> usize {
        self.edges.len()
    }

    /// Appends the kept states of `frag`; returns their new ids.
    fn add(&mut self, frag: &Explored, kept: &[usize], ps: &PowersetStructure) -> Vec<usize> {
        let mut ids = HashMap::new();
        for &s in kept {
            if frag.nodes[s] == Node::AccSink {
                if let Some(g) = self.acc_sink {
                    ids.insert(s, g);
                    continue;
                }
                self.acc_sink = Some(self.edges.len());
            }
            ids.insert(s, self.edges.len());
            self.edges.push(Vec::new());
        }
        for &s in kept {
            let g = ids[&s];
            if !self.edges[g].is_empty() {
                continue;
            }
            self.edges[g] = (0..frag.num_symbols)
                .map(|a| match frag.edge(s, a) {
                    Edge::To(q, pr) => AsmEdge::To(ids[q], *pr),
                    Edge::Hole(t) => AsmEdge::Hole(ps.node_of(t).expect("hole target in powerset")),
                })
                .collect();
        }
        kept.iter().map(|s| ids[s]).collect()
    }
}

fn scc_count(dpa: &Dpa) -> usize {
    let syms = dpa.num_symbols();
    let sccs = tarjan(dpa.num_states(), |p| (0..syms).map(move |a| dpa.succ(p, a)).collect::<Vec<_>>());
    (0..sccs.len())
        .filter(|&c| {
            let m = &sccs.members[c];
            m.len() > 1 || (0..syms).any(|a| dpa.succ(m[0], a) == m[0])
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det::explore::determinize_plain;
    use crate::fixtures::ex_a1;
    use crate::oracle::dpa_equivalent;

    #[test]
    fn single_powerset_scc_matches_plain() {
        let cfg = DetConfig {
            topological: true,
            ..DetConfig::default()
        };
        let t = determinize_topo(&ex_a1(), &cfg, &Limits::default()).unwrap();
        let p = determinize_plain(&ex_a1(), &cfg, &Limits::default()).unwrap();
        assert_eq!(t.dpa.num_states(), 2);
        assert_eq!(dpa_equivalent(&t.dpa, &p.dpa).unwrap(), Ok(()));
    }

    #[test]
    fn kept_bottom_prefers_smallest() {
        // 0 -> {1,2} (one SCC of 2), 0 -> 3 (self-loop)
        let frag = Explored {
            nodes: vec![Node::AccSink; 4],
            tags: vec![StateSet::empty(1); 4],
            edges: vec![
                Edge::To(1, 1),
                Edge::To(3, 1),
                Edge::To(2, 1),
                Edge::To(2, 1),
                Edge::To(1, 1),
                Edge::To(1, 1),
                Edge::To(3, 1),
                Edge::To(3, 1),
            ],
            num_symbols: 2,
        };
        assert_eq!(select_kept_bottom(&frag, false), vec![3]);
    }
}
