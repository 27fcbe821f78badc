//! The individual stages of one macrostate transition.

use crate::automaton::Nba;
use crate::det::config::MergeStrategy;
use crate::det::macrostate::{subtree_start, Macrostate, RankedSlice};
use crate::det::policy::{ComponentMode, ComponentPolicy};
use crate::stateset::StateSet;

/// A set during a transition, before empty sets are pruned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub set: StateSet,
    pub rank: u32,
    /// Created during this transition.
    pub fresh: bool,
}

impl Entry {
    fn old(set: StateSet, rank: u32) -> Self {
        Entry {
            set,
            rank,
            fresh: false,
        }
    }
}

/// Intermediate macrostate between step and prune.
#[derive(Clone, Debug)]
pub struct Work {
    pub comps: Vec<Vec<Entry>>,
    pub buffer: StateSet,
}

impl Work {
    pub fn states(&self) -> StateSet {
        let mut out = self.buffer.clone();
        for c in &self.comps {
            for e in c {
                out.union_with(&e.set);
            }
        }
        out
    }
}

/// Successor of one slice under `sym`. Fresh ranks are drawn from
/// `next_fresh` left to right.
pub fn step_slice(
    slice: &RankedSlice,
    sym: usize,
    nba: &Nba,
    mode: ComponentMode,
    next_fresh: &mut u32,
) -> Vec<Entry> {
    let mut out = Vec::with_capacity(slice.len() * 2);
    for (s, &r) in slice.sets.iter().zip(&slice.ranks) {
        let succ = nba.post(s, sym);
        match mode {
            ComponentMode::General => {
                let acc = succ.intersection(nba.accepting());
                let rest = succ.difference(nba.accepting());
                out.push(Entry {
                    set: acc,
                    rank: *next_fresh,
                    fresh: true,
                });
                *next_fresh += 1;
                out.push(Entry::old(rest, r));
            }
            ComponentMode::DetNoSplit | ComponentMode::Breakpoint => out.push(Entry::old(succ, r)),
        }
    }
    let mut seen = StateSet::empty(nba.num_states());
    for e in &mut out {
        e.set.difference_with(&seen);
        seen.union_with(&e.set);
    }
    out
}

/// Steps every component and computes the buffer successors.
pub fn step(ms: &Macrostate, sym: usize, nba: &Nba, policy: &ComponentPolicy, next_fresh: &mut u32) -> Work {
    let comps = ms
        .comps
        .iter()
        .zip(&policy.modes)
        .map(|(slice, mode)| step_slice(slice, sym, nba, *mode, next_fresh))
        .collect();
    Work {
        comps,
        buffer: nba.post(&ms.buffer, sym),
    }
}

/// Moves every state into the part of the macrostate its policy demands.
pub fn relocate(work: &mut Work, policy: &ComponentPolicy, next_fresh: &mut u32) {
    let n = work.buffer.capacity();
    let mut wrong = StateSet::empty(n);
    for (c, entries) in work.comps.iter_mut().enumerate() {
        let dom = &policy.domains[c];
        for e in entries.iter_mut() {
            let stray = e.set.difference(dom);
            if !stray.is_empty() {
                e.set.intersect_with(dom);
                wrong.union_with(&stray);
            }
        }
    }
    wrong.union_with(&work.buffer);
    let mut buffer = wrong.intersection(&policy.buffer_rejecting);

    for c in 0..policy.len() {
        let incoming = wrong.intersection(&policy.domains[c]);
        let mut present = StateSet::empty(n);
        for e in &work.comps[c] {
            present.union_with(&e.set);
        }
        if policy.modes[c] == ComponentMode::Breakpoint {
            let incoming = incoming.difference(&present);
            if !present.is_empty() {
                buffer.union_with(&incoming);
            } else if !incoming.is_empty() {
                work.comps[c].push(Entry {
                    set: incoming,
                    rank: *next_fresh,
                    fresh: true,
                });
                *next_fresh += 1;
            }
        } else {
            let new = incoming.difference(&present);
            if !new.is_empty() {
                work.comps[c].push(Entry {
                    set: new,
                    rank: *next_fresh,
                    fresh: true,
                });
                *next_fresh += 1;
            }
        }
    }
    work.buffer = buffer;
}

/// Good and bad ranks of one transition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signals {
    pub good: Vec<u32>,
    pub bad: Vec<u32>,
}

impl Signals {
    /// Dominating rank, or `sentinel` when no signal fired.
    pub fn dominating(&self, sentinel: u32) -> u32 {
        self.good.iter().chain(&self.bad).copied().min().unwrap_or(sentinel)
    }

    /// `(k, priority)` with `k = min(G ∪ R)` or `num_states + 1`.
    pub fn priority(&self, num_states: usize) -> (u32, u32) {
        let k = self.dominating(num_states as u32 + 1);
        let p = if self.good.contains(&k) { 2 * k } else { 2 * k - 1 };
        (k, p)
    }
}

/// Removes empty sets of a general component. A nonempty set absorbs the run
/// of empty sets directly to its right and keeps the smallest rank among them.
pub fn prune_general(entries: &[Entry], signals: &mut Signals) -> RankedSlice {
    let ranks: Vec<u32> = entries.iter().map(|e| e.rank).collect();
    for (p, e) in entries.iter().enumerate() {
        if e.fresh || !e.set.is_empty() {
            continue;
        }
        let st = subtree_start(&ranks, p);
        if entries[st..=p].iter().all(|x| x.set.is_empty()) {
            signals.bad.push(e.rank);
        } else {
            signals.good.push(e.rank);
        }
    }
    let mut out = RankedSlice::new();
    for e in entries {
        if !e.set.is_empty() {
            out.push(e.set.clone(), e.rank);
        } else if let Some(last) = out.ranks.last_mut() {
            *last = (*last).min(e.rank);
        }
    }
    out
}

fn prune_simple(entries: &[Entry], mode: ComponentMode, nba: &Nba, signals: &mut Signals) -> RankedSlice {
    let mut out = RankedSlice::new();
    for e in entries {
        if e.set.is_empty() {
            if !e.fresh {
                signals.bad.push(e.rank);
            }
            continue;
        }
        if !e.fresh {
            let green = match mode {
                ComponentMode::Breakpoint => true,
                _ => e.set.intersects(nba.accepting()),
            };
            if green {
                signals.good.push(e.rank);
            }
        }
        out.push(e.set.clone(), e.rank);
    }
    out
}

/// Drops empty sets and collects the signals. Ranks are not normalized.
pub fn prune(work: Work, policy: &ComponentPolicy, nba: &Nba) -> (Macrostate, Signals) {
    let mut signals = Signals::default();
    let comps = work
        .comps
        .iter()
        .zip(&policy.modes)
        .map(|(entries, mode)| match mode {
            ComponentMode::General => prune_general(entries, &mut signals),
            _ => prune_simple(entries, *mode, nba, &mut signals),
        })
        .collect();
    signals.good.sort_unstable();
    signals.bad.sort_unstable();
    (
        Macrostate {
            comps,
            buffer: work.buffer,
        },
        signals,
    )
}

/// Applies `strategy`; sets with rank `< k` are never touched.
pub fn merge(ms: &mut Macrostate, k: u32, good: &[u32], strategy: MergeStrategy) {
    match strategy {
        MergeStrategy::MullerSchupp => {}
        MergeStrategy::Safra => {
            for &r in good {
                for slice in &mut ms.comps {
                    if let Some(p) = slice.position_of_rank(r) {
                        let st = slice.subtree_start(p);
                        collapse(slice, st, p, r);
                        break;
                    }
                }
            }
        }
        MergeStrategy::MaxCollapse => {
            for slice in &mut ms.comps {
                if let Some(p) = slice.position_of_rank(k) {
                    let st = slice.subtree_start(p);
                    collapse(slice, st, p, k);
                }
                let mut i = 0;
                while i < slice.len() {
                    if slice.ranks[i] <= k {
                        i += 1;
                        continue;
                    }
                    let mut j = i;
                    while j + 1 < slice.len() && slice.ranks[j + 1] > k {
                        j += 1;
                    }
                    let low = *slice.ranks[i..=j].iter().min().expect("nonempty run");
                    collapse(slice, i, j, low);
                    i += 1;
                }
            }
        }
    }
}

/// Replaces positions `from..=to` by their union carrying `rank`.
fn collapse(slice: &mut RankedSlice, from: usize, to: usize, rank: u32) {
    if from == to {
        slice.ranks[from] = rank;
        return;
    }
    let mut u = slice.sets[from].clone();
    for s in &slice.sets[from + 1..=to] {
        u.union_with(s);
    }
    slice.sets.splice(from..=to, [u]);
    slice.ranks.splice(from..=to, [rank]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex_a1, SYM_A, SYM_B};

    fn set(n: usize, xs: &[usize]) -> StateSet {
        StateSet::from_iter_in(n, xs.iter().copied())
    }

    fn slice(n: usize, parts: &[(&[usize], u32)]) -> RankedSlice {
        RankedSlice::from_parts(
            parts.iter().map(|(s, _)| set(n, s)).collect(),
            parts.iter().map(|(_, r)| *r).collect(),
        )
    }

    #[test]
    fn general_step_splits_and_dedups() {
        let nba = ex_a1();
        let mut fresh = 3;
        let out = step_slice(&slice(2, &[(&[1], 2), (&[0], 1)]), SYM_A, &nba, ComponentMode::General, &mut fresh);
        let shape: Vec<(Vec<usize>, u32, bool)> =
            out.iter().map(|e| (e.set.iter().collect(), e.rank, e.fresh)).collect();
        assert_eq!(
            shape,
            vec![(vec![1], 3, true), (vec![], 2, false), (vec![], 4, true), (vec![0], 1, false)]
        );

        let mut fresh = 2;
        let out = step_slice(&slice(2, &[(&[0], 1)]), SYM_B, &nba, ComponentMode::General, &mut fresh);
        assert!(out[0].set.is_empty() && out[0].fresh);
        assert_eq!(out[1], Entry::old(set(2, &[0]), 1));
    }

    #[test]
    fn det_step_leftmost_wins() {
        // p=0, q=1 both reach r=2 on symbol 0
        let mut nba = Nba::new(3, crate::automaton::Alphabet::with_aps(0));
        nba.add_edge(0, 0, 2);
        nba.add_edge(1, 0, 2);
        let mut fresh = 3;
        let out = step_slice(&slice(3, &[(&[0], 1), (&[1], 2)]), 0, &nba, ComponentMode::DetNoSplit, &mut fresh);
        assert_eq!(out[0].set, set(3, &[2]));
        assert!(out[1].set.is_empty());
        assert_eq!(fresh, 3);
    }

    #[test]
    fn prune_inherits_and_signals() {
        let e = |s: &[usize], r: u32, fresh: bool| Entry {
            set: set(2, s),
            rank: r,
            fresh,
        };
        let mut sig = Signals::default();
        let out = prune_general(&[e(&[1], 3, true), e(&[], 2, false), e(&[], 4, true), e(&[0], 1, false)], &mut sig);
        assert_eq!(out, slice(2, &[(&[1], 2), (&[0], 1)]));
        assert_eq!(sig.good, vec![2]);
        assert!(sig.bad.is_empty());

        let mut sig = Signals::default();
        let out = prune_general(&[e(&[], 3, true), e(&[], 2, false), e(&[], 4, true), e(&[0], 1, false)], &mut sig);
        assert_eq!(out, slice(2, &[(&[0], 1)]));
        assert_eq!(sig.bad, vec![2]);
        assert!(sig.good.is_empty());
    }

    #[test]
    fn priority_formula() {
        let s = |g: Vec<u32>, b: Vec<u32>| Signals { good: g, bad: b };
        assert_eq!(s(vec![2], vec![]).priority(2), (2, 4));
        assert_eq!(s(vec![], vec![2]).priority(2), (2, 3));
        assert_eq!(s(vec![], vec![]).priority(2), (3, 5));
    }

    #[test]
    fn merges() {
        let n = 4;
        let base = slice(n, &[(&[0], 3), (&[1], 4), (&[2], 2), (&[3], 1)]);
        let mut m = Macrostate {
            comps: vec![base.clone()],
            buffer: StateSet::empty(n),
        };
        merge(&mut m, 2, &[2], MergeStrategy::MaxCollapse);
        assert_eq!(m.comps[0], slice(n, &[(&[0, 1, 2], 2), (&[3], 1)]));

        let mut m = Macrostate {
            comps: vec![slice(n, &[(&[0], 3), (&[1], 2), (&[3], 1)])],
            buffer: StateSet::empty(n),
        };
        merge(&mut m, 2, &[2], MergeStrategy::Safra);
        assert_eq!(m.comps[0], slice(n, &[(&[0, 1], 2), (&[3], 1)]));

        let mut m = Macrostate {
            comps: vec![base.clone()],
            buffer: StateSet::empty(n),
        };
        merge(&mut m, 2, &[2], MergeStrategy::MullerSchupp);
        assert_eq!(m.comps[0], base);
    }
}
