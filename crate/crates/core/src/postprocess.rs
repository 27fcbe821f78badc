//! Priority minimization and Mealy-style state reduction of DPAs.

use std::collections::HashMap;

use crate::automaton::Dpa;
use crate::graph::tarjan;

/// Relabels priorities with as few values as possible while keeping the
/// parity of the least priority on every cycle.
pub fn minimize_priorities(dpa: &Dpa) -> Dpa {
    let even = relabel(dpa, 0);
    let odd = relabel(dpa, 1);
    let distinct = |v: &[u32]| v.iter().collect::<std::collections::BTreeSet<_>>().len();
    let mut res = dpa.clone();
    res.set_priorities(if distinct(&odd) < distinct(&even) { odd } else { even });
    res
}

/// The recursive relabelling with the counter starting at `start`.
fn relabel(dpa: &Dpa, start: u32) -> Vec<u32> {
    let n = dpa.num_states();
    let syms = dpa.num_symbols();
    let all: Vec<usize> = (0..n * syms).collect();
    let mut out: Vec<Option<u32>> = vec![None; all.len()];
    let transient = solve(dpa, &all, start, &mut out);
    let fallback = out.iter().flatten().copied().min().unwrap_or(start);
    for e in transient {
        out[e] = Some(fallback);
    }
    out.into_iter().map(|p| p.expect("every edge assigned")).collect()
}

/// Assigns values to the cycle edges among `edges`; returns the edges lying
/// on no cycle of this subgraph, which the caller labels.
fn solve(dpa: &Dpa, edges: &[usize], next: u32, out: &mut [Option<u32>]) -> Vec<usize> {
    let syms = dpa.num_symbols();
    let n = dpa.num_states();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in edges {
        adj[e / syms].push(dpa.succ(e / syms, e % syms));
    }
    let sccs = tarjan(n, |v| adj[v].clone());
    let mut inner: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    let mut transient = Vec::new();
    for &e in edges {
        let (p, q) = (e / syms, dpa.succ(e / syms, e % syms));
        if sccs.scc_of[p] == sccs.scc_of[q] {
            inner[sccs.scc_of[p]].push(e);
        } else {
            transient.push(e);
        }
    }
    let prio = dpa.priorities();
    for cyc in inner.into_iter().filter(|c| !c.is_empty()) {
        let m = cyc.iter().map(|e| prio[*e]).min().expect("nonempty");
        let v = if next % 2 != m % 2 { next + 1 } else { next };
        let mut rest = Vec::new();
        for e in cyc {
            if prio[e] == m {
                out[e] = Some(v);
            } else {
                rest.push(e);
            }
        }
        for e in solve(dpa, &rest, v, out) {
            out[e] = Some(v);
        }
    }
    transient
}

/// Merges states that emit the same priority sequence on every input word.
pub fn minimize_mealy(dpa: &Dpa) -> Dpa {
    let n = dpa.num_states();
    let syms = dpa.num_symbols();
    let mut block = vec![0usize; n];
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<(u32, usize)>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for p in 0..n {
            let sig = (
                block[p],
                (0..syms).map(|a| (dpa.priority(p, a), block[dpa.succ(p, a)])).collect(),
            );
            let len = ids.len();
            next[p] = *ids.entry(sig).or_insert(len);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut rep = vec![usize::MAX; count];
    for p in (0..n).rev() {
        rep[block[p]] = p;
    }
    let mut out = Dpa::new(count, dpa.alphabet().clone(), block[dpa.initial()]);
    for (b, &p) in rep.iter().enumerate() {
        for a in 0..syms {
            out.set_edge(b, a, block[dpa.succ(p, a)], dpa.priority(p, a));
        }
    }
    out
}

/// Monotone, parity-preserving map onto a dense range starting at 0 or 1.
pub fn compress_priorities(dpa: &Dpa) -> Dpa {
    let distinct = dpa.distinct_priorities();
    let mut map = HashMap::new();
    let mut cur = match distinct.first() {
        Some(p) => p % 2,
        None => 0,
    };
    let mut prev_parity = cur;
    for &p in &distinct {
        if p % 2 != prev_parity {
            cur += 1;
            prev_parity = p % 2;
        }
        map.insert(p, cur);
    }
    let mut out = dpa.clone();
    out.set_priorities(dpa.priorities().iter().map(|p| map[p]).collect());
    out
}

/// Priority minimization, then Mealy reduction, then a dense remap.
pub fn postprocess(dpa: &Dpa) -> Dpa {
    compress_priorities(&minimize_mealy(&minimize_priorities(dpa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Alphabet;

    /// The 2-state DPA of the `finitely many b` fixture.
    fn fixture_dpa() -> Dpa {
        let mut d = Dpa::new(2, Alphabet::new(vec!["b".into()]), 0);
        d.set_edge(0, 0, 1, 5);
        d.set_edge(0, 1, 0, 5);
        d.set_edge(1, 0, 1, 4);
        d.set_edge(1, 1, 0, 3);
        d
    }

    #[test]
    fn fixture_priorities() {
        let m = minimize_priorities(&fixture_dpa());
        assert_eq!(m.priority(0, 1), 1);
        assert_eq!(m.priority(1, 1), 1);
        assert_eq!(m.priority(0, 0), 1);
        assert_eq!(m.priority(1, 0), 2);
        assert_eq!(minimize_priorities(&m), m);
        let q = minimize_mealy(&m);
        assert_eq!(q.num_states(), 2);
        let p = postprocess(&fixture_dpa());
        assert_eq!((p.num_states(), p.distinct_priorities()), (2, vec![1, 2]));
    }

    #[test]
    fn all_even_cycles_collapse_to_zero() {
        let mut d = Dpa::new(2, Alphabet::with_aps(1), 0);
        d.set_edge(0, 0, 1, 4);
        d.set_edge(0, 1, 0, 6);
        d.set_edge(1, 0, 0, 2);
        d.set_edge(1, 1, 1, 8);
        let m = minimize_priorities(&d);
        assert_eq!(m.distinct_priorities(), vec![0]);
        let p = postprocess(&d);
        assert_eq!(p.num_states(), 1);
    }

    #[test]
    fn bisimilar_duplicates_merge() {
        let mut d = Dpa::new(3, Alphabet::with_aps(0), 0);
        d.set_edge(0, 0, 1, 1);
        d.set_edge(1, 0, 2, 1);
        d.set_edge(2, 0, 1, 1);
        assert_eq!(minimize_mealy(&d).num_states(), 1);
    }

    #[test]
    fn compress_keeps_parity() {
        let mut d = Dpa::new(1, Alphabet::with_aps(1), 0);
        d.set_edge(0, 0, 0, 3);
        d.set_edge(0, 1, 0, 5);
        let c = compress_priorities(&d);
        assert_eq!(c.distinct_priorities(), vec![1]);
        d.set_edge(0, 1, 0, 6);
        assert_eq!(compress_priorities(&d).distinct_priorities(), vec![1, 2]);
    }

    #[test]
    fn disjoint_sccs_of_both_parities_share_values() {
        let mut d = Dpa::new(3, Alphabet::with_aps(1), 0);
        for (p, a, q, pr) in [(0, 0, 1, 2), (0, 1, 2, 1), (1, 0, 0, 2), (1, 1, 2, 3), (2, 0, 2, 2), (2, 1, 2, 1)] {
            d.set_edge(p, a, q, pr);
        }
        assert_eq!(minimize_priorities(&d).distinct_priorities(), vec![1, 2]);
    }
}
