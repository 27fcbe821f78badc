//! Set-sequence encoding of ranked slices and the successor trie used to
//! reuse existing macrostates.

use std::collections::HashMap;

use crate::det::macrostate::{Macrostate, RankedSlice};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

/// Encodes a slice as `Q_t` followed by the subtree unions in ascending rank
/// order. A union equal to `Q_t` (the subtree of a single root) is skipped.
pub fn encode_sequence(slice: &RankedSlice, n: usize) -> Vec<StateSet> {
    encode_with_ranks(slice, n).into_iter().map(|(s, _)| s).collect()
}

/// Like [`encode_sequence`], with the rank behind every element after the first.
fn encode_with_ranks(slice: &RankedSlice, n: usize) -> Vec<(StateSet, Option<u32>)> {
    if slice.is_empty() {
        return Vec::new();
    }
    let all = slice.states(n);
    let mut order: Vec<usize> = (0..slice.len()).collect();
    order.sort_by_key(|p| slice.ranks[*p]);
    let mut out = vec![(all.clone(), None)];
    for p in order {
        let u = slice.subtree_union(p, n);
        if u != all {
            out.push((u, Some(slice.ranks[p])));
        }
    }
    out
}

/// Inverse of [`encode_sequence`]; ranks come out as `1..=len`.
pub fn decode_sequence(seq: &[StateSet]) -> Result<RankedSlice> {
    let Some(first) = seq.first() else {
        return Ok(RankedSlice::new());
    };
    // node 0 is the root; hosts are the states not claimed by a child
    let mut host = vec![first.clone()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    for (i, e) in seq.iter().enumerate().skip(1) {
        if e.is_empty() {
            return Err(Error::MalformedSequence(format!("element {i} is empty")));
        }
        let Some(parent) = (0..host.len()).find(|x| e.is_subset(&host[*x])) else {
            return Err(Error::MalformedSequence(format!(
                "element {i} = {e} does not fit inside a single node"
            )));
        };
        host[parent].difference_with(e);
        host.push(e.clone());
        children.push(Vec::new());
        children[parent].push(host.len() - 1);
    }
    let virtual_root = host[0].is_empty();
    // node ids are in rank order; children lists are ascending already
    let rank_of = |node: usize| if virtual_root { node as u32 } else { node as u32 + 1 };
    let mut out = RankedSlice::new();
    let mut stack: Vec<(usize, bool)> = vec![(0, false)];
    while let Some((node, expanded)) = stack.pop() {
        if expanded {
            if !(node == 0 && virtual_root) {
                out.push(host[node].clone(), rank_of(node));
            }
            continue;
        }
        stack.push((node, true));
        for &c in children[node].iter().rev() {
            stack.push((c, false));
        }
    }
    Ok(out)
}

type Label = (u32, StateSet);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct TrieKey {
    unions: Vec<StateSet>,
    buffer: StateSet,
}

#[derive(Clone, Debug, Default)]
struct Node {
    children: Vec<usize>,
    marks: Vec<usize>,
}

/// Tries of macrostates keyed by their per-component state sets and buffer.
#[derive(Clone, Debug, Default)]
pub struct SuccessorTrie {
    n: usize,
    roots: HashMap<TrieKey, usize>,
    nodes: Vec<Node>,
    labels: Vec<Label>,
    edges: HashMap<(usize, Label), usize>,
    /// Stored macrostates with the id they stand for.
    entries: Vec<(Macrostate, usize)>,
}

fn key_of(ms: &Macrostate, n: usize) -> TrieKey {
    TrieKey {
        unions: ms.comps.iter().map(|c| c.states(n)).collect(),
        buffer: ms.buffer.clone(),
    }
}

/// The concatenated word of a macrostate with, per element, the rank behind
/// it and whether it belongs to the first nonempty component.
fn word_of(ms: &Macrostate, n: usize) -> Vec<(Label, Option<u32>, bool)> {
    let mut out = Vec::new();
    let mut first = true;
    for (c, slice) in ms.comps.iter().enumerate() {
        if slice.is_empty() {
            continue;
        }
        for (s, r) in encode_with_ranks(slice, n) {
            out.push(((c as u32, s), r, first));
        }
        first = false;
    }
    out
}

impl SuccessorTrie {
    pub fn new(n: usize) -> Self {
        SuccessorTrie {
            n,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn child(&self, node: usize, label: &Label) -> Option<usize> {
        self.edges.get(&(node, label.clone())).copied()
    }

    /// Records that `ms` is represented by `id`. Inserting twice is a no-op.
    pub fn insert(&mut self, ms: &Macrostate, id: usize) {
        let key = key_of(ms, self.n);
        let mut node = match self.roots.get(&key) {
            Some(r) => *r,
            None => {
                self.nodes.push(Node::default());
                self.labels.push((0, StateSet::empty(self.n)));
                let r = self.nodes.len() - 1;
                self.roots.insert(key, r);
                r
            }
        };
        for (label, _, _) in word_of(ms, self.n) {
            node = match self.child(node, &label) {
                Some(c) => c,
                None => {
                    self.nodes.push(Node::default());
                    self.labels.push(label.clone());
                    let c = self.nodes.len() - 1;
                    self.nodes[node].children.push(c);
                    self.edges.insert((node, label), c);
                    c
                }
            };
        }
        if self.nodes[node]
            .marks
            .iter()
            .any(|e| self.entries[*e].0 == *ms && self.entries[*e].1 == id)
        {
            return;
        }
        self.entries.push((ms.clone(), id));
        let e = self.entries.len() - 1;
        self.nodes[node].marks.push(e);
    }

    /// Whether `ms` itself is stored.
    pub fn contains(&self, ms: &Macrostate) -> bool {
        let Some(mut node) = self.roots.get(&key_of(ms, self.n)).copied() else {
            return false;
        };
        for (label, _, _) in word_of(ms, self.n) {
            match self.child(node, &label) {
                Some(c) => node = c,
                None => return false,
            }
        }
        self.nodes[node].marks.iter().any(|e| self.entries[*e].0 == *ms)
    }

    /// Finds a stored macrostate obtainable from `unmerged` by merging
    /// adjacent sets whose ranks are all `>= k`.
    pub fn find(&self, unmerged: &Macrostate, k: u32) -> Option<usize> {
        let mut node = *self.roots.get(&key_of(unmerged, self.n))?;
        let word = word_of(unmerged, self.n);
        let mut depth_limit = vec![0u32; self.n];
        for ((_, s), _, _) in &word {
            for q in s {
                depth_limit[q] += 1;
            }
        }
        let mut depth = vec![0u32; self.n];
        for (i, (label, rank, first)) in word.iter().enumerate() {
            let in_prefix = *first && (i == 0 || rank.is_some_and(|r| r < k));
            if !in_prefix {
                break;
            }
            node = self.child(node, label)?;
            for q in &label.1 {
                depth[q] += 1;
            }
        }
        self.dfs(node, unmerged, k, &depth_limit, &mut depth)
    }

    fn dfs(&self, node: usize, unmerged: &Macrostate, k: u32, limit: &[u32], depth: &mut [u32]) -> Option<usize> {
        for &e in &self.nodes[node].marks {
            let (cand, id) = &self.entries[e];
            if is_valid_merge(unmerged, cand, k) {
                return Some(*id);
            }
        }
        for &c in &self.nodes[node].children {
            let set = &self.labels[c].1;
            if set.iter().any(|q| depth[q] + 1 > limit[q]) {
                continue;
            }
            for q in set {
                depth[q] += 1;
            }
            let found = self.dfs(c, unmerged, k, limit, depth);
            for q in set {
                depth[q] -= 1;
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Single left-to-right scan: every candidate set must be the union of a
/// contiguous run of `base` sets, runs of length above one may only contain
/// ranks `>= k` with rank `k` last, and the normalized run minima must equal
/// the candidate ranks.
pub fn is_valid_merge(base: &Macrostate, cand: &Macrostate, k: u32) -> bool {
    if base.buffer != cand.buffer || base.comps.len() != cand.comps.len() {
        return false;
    }
    let mut mins: Vec<(u32, usize, usize)> = Vec::new();
    for (c, (b, m)) in base.comps.iter().zip(&cand.comps).enumerate() {
        let mut i = 0;
        for (j, target) in m.sets.iter().enumerate() {
            let mut acc: Option<StateSet> = None;
            let mut low = u32::MAX;
            let mut run_len = 0;
            let mut touches_low = false;
            let mut after_k = false;
            while acc.as_ref() != Some(target) {
                if i >= b.len() || !b.sets[i].is_subset(target) {
                    return false;
                }
                match &mut acc {
                    Some(a) => a.union_with(&b.sets[i]),
                    None => acc = Some(b.sets[i].clone()),
                }
                low = low.min(b.ranks[i]);
                touches_low |= b.ranks[i] < k || after_k;
                after_k |= b.ranks[i] == k;
                run_len += 1;
                i += 1;
            }
            if run_len > 1 && touches_low {
                return false;
            }
            mins.push((low, c, j));
        }
        if i != b.len() {
            return false;
        }
    }
    let mut sorted: Vec<u32> = mins.iter().map(|m| m.0).collect();
    sorted.sort_unstable();
    mins.iter().all(|(low, c, j)| {
        let norm = sorted.binary_search(low).expect("present") as u32 + 1;
        cand.comps[*c].ranks[*j] == norm
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> StateSet {
        StateSet::from_iter_in(n, xs.iter().copied())
    }

    fn slice(n: usize, parts: &[(&[usize], u32)]) -> RankedSlice {
        RankedSlice::from_parts(
            parts.iter().map(|(s, _)| set(n, s)).collect(),
            parts.iter().map(|(_, r)| *r).collect(),
        )
    }

    fn fig4b() -> RankedSlice {
        // q1..q6 as 1..6
        slice(7, &[(&[3, 4], 4), (&[2], 2), (&[5, 6], 3), (&[1], 1)])
    }

    #[test]
    fn encodes_rank_tree_example() {
        let seq = encode_sequence(&fig4b(), 7);
        assert_eq!(
            seq,
            vec![set(7, &[1, 2, 3, 4, 5, 6]), set(7, &[2, 3, 4]), set(7, &[5, 6]), set(7, &[3, 4])]
        );
        assert_eq!(decode_sequence(&seq).unwrap(), fig4b());
    }

    #[test]
    fn forest_uses_virtual_root() {
        let s = slice(2, &[(&[0], 1), (&[1], 2)]);
        let seq = encode_sequence(&s, 2);
        assert_eq!(seq, vec![set(2, &[0, 1]), set(2, &[0]), set(2, &[1])]);
        assert_eq!(decode_sequence(&seq).unwrap(), s);
        let single = slice(1, &[(&[0], 1)]);
        assert_eq!(encode_sequence(&single, 1), vec![set(1, &[0])]);
    }

    #[test]
    fn malformed_sequences_are_rejected() {
        let bad = vec![set(3, &[0, 1]), set(3, &[1, 2])];
        assert!(matches!(decode_sequence(&bad), Err(Error::MalformedSequence(_))));
    }

    fn ms(slice: RankedSlice, n: usize) -> Macrostate {
        Macrostate {
            comps: vec![slice],
            buffer: StateSet::empty(n),
        }
    }

    #[test]
    fn insert_find_and_prefix_navigation() {
        let n = 4;
        let base = ms(slice(n, &[(&[0], 3), (&[1], 4), (&[2], 2), (&[3], 1)]), n);
        let mut trie = SuccessorTrie::new(n);
        assert_eq!(trie.find(&base, 2), None);
        trie.insert(&base, 7);
        trie.insert(&base, 7);
        assert_eq!(trie.len(), 1);
        assert!(trie.contains(&base));
        assert_eq!(trie.find(&base, 2), Some(7));

        let merged = ms(slice(n, &[(&[0, 1, 2], 2), (&[3], 1)]), n);
        let mut t2 = SuccessorTrie::new(n);
        t2.insert(&merged, 3);
        assert_eq!(t2.find(&base, 2), Some(3));
        // with k = 3 the set of rank 2 must stay alone
        assert_eq!(t2.find(&base, 3), None);
    }

    #[test]
    fn shared_prefixes_share_paths() {
        let n = 3;
        let a = ms(slice(n, &[(&[0], 2), (&[1], 3), (&[2], 1)]), n);
        let b = ms(slice(n, &[(&[0], 2), (&[1, 2], 1)]), n);
        let mut trie = SuccessorTrie::new(n);
        trie.insert(&a, 0);
        let before = trie.nodes.len();
        trie.insert(&b, 1);
        // b's word is a prefix of a's word
        assert_eq!(trie.nodes.len(), before);
        assert!(trie.contains(&a) && trie.contains(&b));
    }
}
