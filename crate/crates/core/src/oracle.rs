//! Membership of ultimately periodic words and equivalence checks.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Alphabet, Dpa, Nba};
use crate::error::{Error, Result};
use crate::graph::tarjan;
use crate::stateset::StateSet;

/// The word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { prefix, cycle }
    }

    /// Renders as `u|v` with every symbol shown as its true propositions.
    pub fn render(&self, al: &Alphabet) -> String {
        format!("{}|{}", al.render_word(&self.prefix), al.render_word(&self.cycle))
    }
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[usize]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{}|{}", join(&self.prefix), join(&self.cycle))
    }
}

/// All words over `syms` symbols of length exactly `len`, in lexicographic order.
fn words_of_len(syms: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..syms).map(move |a| {
                    let mut w2 = w.clone();
                    w2.push(a);
                    w2
                })
            })
            .collect();
    }
    out
}

/// Every lasso with `|u| <= max_prefix` and `1 <= |v| <= max_cycle`, shortest
/// prefixes first, then shortest cycles, each lexicographically.
pub fn enumerate_lassos(syms: usize, max_prefix: usize, max_cycle: usize) -> Vec<Lasso> {
    let cycles: Vec<Vec<usize>> = (1..=max_cycle).flat_map(|l| words_of_len(syms, l)).collect();
    let mut out = Vec::new();
    for lu in 0..=max_prefix {
        for u in words_of_len(syms, lu) {
            for v in &cycles {
                out.push(Lasso::new(u.clone(), v.clone()));
            }
        }
    }
    out
}

pub fn nba_accepts_lasso(nba: &Nba, lasso: &Lasso) -> bool {
    let mut cur = nba.initial().clone();
    for &a in &lasso.prefix {
        cur = nba.post(&cur, a);
    }
    if cur.is_empty() {
        return false;
    }
    let n = nba.num_states();
    let len = lasso.cycle.len();
    let id = |q: usize, i: usize| i * n + q;
    let succ = |v: usize| -> Vec<usize> {
        let (i, q) = (v / n, v % n);
        let j = (i + 1) % len;
        nba.succ(q, lasso.cycle[i]).iter().map(|q2| id(q2, j)).collect()
    };
    let total = n * len;
    let reach = crate::graph::reachable(total, cur.iter().map(|q| id(q, 0)), succ);
    let sccs = tarjan(total, |v| if reach[v] { succ(v) } else { Vec::new() });
    (0..total).any(|v| {
        reach[v] && nba.is_accepting(v % n) && {
            let c = sccs.scc_of[v];
            sccs.members[c].len() > 1 || succ(v).contains(&v)
        }
    })
}

pub fn dpa_accepts_lasso(dpa: &Dpa, lasso: &Lasso) -> bool {
    let mut q = dpa.initial();
    for &a in &lasso.prefix {
        q = dpa.succ(q, a);
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut block_min = Vec::new();
    loop {
        if let Some(&start) = seen.get(&q) {
            let m = block_min[start..].iter().min().copied().expect("nonempty loop");
            return m % 2 == 0;
        }
        seen.insert(q, block_min.len());
        let mut m = u32::MAX;
        for &a in &lasso.cycle {
            m = m.min(dpa.priority(q, a));
            q = dpa.succ(q, a);
        }
        block_min.push(m);
    }
}

/// Precomputed NBA membership for a fixed lasso set.
#[derive(Clone, Debug)]
pub struct LassoTable {
    pub lassos: Vec<Lasso>,
    pub accepted: Vec<bool>,
}

impl LassoTable {
    pub fn new(nba: &Nba, max_prefix: usize, max_cycle: usize) -> Self {
        let lassos = enumerate_lassos(nba.num_symbols(), max_prefix, max_cycle);
        let accepted = lassos.iter().map(|l| nba_accepts_lasso(nba, l)).collect();
        LassoTable { lassos, accepted }
    }

    /// First lasso on which `dpa` disagrees with the table.
    pub fn check(&self, dpa: &Dpa) -> std::result::Result<(), Lasso> {
        for (l, acc) in self.lassos.iter().zip(&self.accepted) {
            if dpa_accepts_lasso(dpa, l) != *acc {
                return Err(l.clone());
            }
        }
        Ok(())
    }
}

/// Compares an NBA and a DPA on every lasso within the bounds.
pub fn bounded_equivalence(
    nba: &Nba,
    dpa: &Dpa,
    max_prefix: usize,
    max_cycle: usize,
) -> Result<std::result::Result<(), Lasso>> {
    if nba.alphabet() != dpa.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(LassoTable::new(nba, max_prefix, max_cycle).check(dpa))
}

/// Exact language equivalence of two DPAs; `Ok(Err(lasso))` carries a word
/// accepted by exactly one of them.
pub fn dpa_equivalent(d1: &Dpa, d2: &Dpa) -> Result<std::result::Result<(), Lasso>> {
    if d1.alphabet() != d2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let syms = d1.num_symbols();
    // reachable product, numbered in BFS order
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(d1.initial(), d2.initial())];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for a in 0..syms {
            let t = (d1.succ(p, a), d2.succ(q, a));
            let id = *index.entry(t).or_insert_with(|| {
                pairs.push(t);
                parent.push(Some((i, a)));
                pairs.len() - 1
            });
            delta.push((id, d1.priority(p, a), d2.priority(q, a)));
        }
        i += 1;
    }
    let n = pairs.len();
    let pr1 = d1.distinct_priorities();
    let pr2 = d2.distinct_priorities();
    for &i1 in &pr1 {
        for &j2 in &pr2 {
            if i1 % 2 == j2 % 2 {
                continue;
            }
            let allowed = |e: usize| delta[e].1 >= i1 && delta[e].2 >= j2;
            let sccs = tarjan(n, |v| {
                (0..syms)
                    .filter(|a| allowed(v * syms + a))
                    .map(|a| delta[v * syms + a].0)
                    .collect::<Vec<_>>()
            });
            for (c, members) in sccs.members.iter().enumerate() {
                let inside = |e: usize| allowed(e) && sccs.scc_of[delta[e].0] == c;
                let mut hit1 = None;
                let mut hit2 = None;
                for &v in members {
                    for a in 0..syms {
                        let e = v * syms + a;
                        if inside(e) {
                            if delta[e].1 == i1 && hit1.is_none() {
                                hit1 = Some(e);
                            }
                            if delta[e].2 == j2 && hit2.is_none() {
                                hit2 = Some(e);
                            }
                        }
                    }
                }
                if let (Some(e1), Some(e2)) = (hit1, hit2) {
                    let lasso = witness(&delta, syms, &parent, members[0], e1, e2, &inside);
                    debug_assert_ne!(dpa_accepts_lasso(d1, &lasso), dpa_accepts_lasso(d2, &lasso));
                    return Ok(Err(lasso));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Prefix to `root`, then a cycle inside the SCC through edges `e1` and `e2`.
fn witness(
    delta: &[(usize, u32, u32)],
    syms: usize,
    parent: &[Option<(usize, usize)>],
    root: usize,
    e1: usize,
    e2: usize,
    inside: &dyn Fn(usize) -> bool,
) -> Lasso {
    let mut prefix = Vec::new();
    let mut v = root;
    while let Some((p, a)) = parent[v] {
        prefix.push(a);
        v = p;
    }
    prefix.reverse();
    // BFS path inside the SCC
    let path = |from: usize, to: usize| -> Vec<usize> {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = StateSet::empty(delta.len() / syms);
        seen.insert(from);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for a in 0..syms {
                let e = x * syms + a;
                let y = delta[e].0;
                if inside(e) && seen.insert(y) {
                    prev.insert(y, (x, a));
                    queue.push_back(y);
                }
            }
        }
        let mut w = Vec::new();
        let mut y = to;
        while y != from {
            let (x, a) = prev[&y];
            w.push(a);
            y = x;
        }
        w.reverse();
        w
    };
    let (s1, a1) = (e1 / syms, e1 % syms);
    let (s2, a2) = (e2 / syms, e2 % syms);
    let mut cycle = path(root, s1);
    cycle.push(a1);
    cycle.extend(path(delta[e1].0, s2));
    cycle.push(a2);
    cycle.extend(path(delta[e2].0, root));
    Lasso::new(prefix, cycle)
}
