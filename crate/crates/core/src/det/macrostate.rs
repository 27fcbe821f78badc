use std::fmt;

use crate::stateset::StateSet;

/// Tuple of disjoint nonempty state sets with injective ranks.
///
/// Ranks are global across the components of a macrostate; within one slice
/// they only need to be distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankedSlice {
    pub sets: Vec<StateSet>,
    pub ranks: Vec<u32>,
}

impl RankedSlice {
    pub fn new() -> Self {
        RankedSlice {
            sets: Vec::new(),
            ranks: Vec::new(),
        }
    }

    pub fn from_parts(sets: Vec<StateSet>, ranks: Vec<u32>) -> Self {
        assert_eq!(sets.len(), ranks.len());
        RankedSlice { sets, ranks }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, set: StateSet, rank: u32) {
        self.sets.push(set);
        self.ranks.push(rank);
    }

    /// Union of all sets.
    pub fn states(&self, n: usize) -> StateSet {
        let mut out = StateSet::empty(n);
        for s in &self.sets {
            out.union_with(s);
        }
        out
    }

    /// Closest position to the right holding a smaller rank.
    pub fn parent(&self, i: usize) -> Option<usize> {
        parent_index(&self.ranks, i)
    }

    /// First position of the subtree rooted at `i`; the subtree is
    /// `subtree_start(i)..=i`.
    pub fn subtree_start(&self, i: usize) -> usize {
        subtree_start(&self.ranks, i)
    }

    pub fn subtree_union(&self, i: usize, n: usize) -> StateSet {
        let mut out = StateSet::empty(n);
        for s in &self.sets[self.subtree_start(i)..=i] {
            out.union_with(s);
        }
        out
    }

    pub fn position_of_rank(&self, r: u32) -> Option<usize> {
        self.ranks.iter().position(|x| *x == r)
    }
}

impl Default for RankedSlice {
    fn default() -> Self {
        Self::new()
    }
}

pub fn parent_index(ranks: &[u32], i: usize) -> Option<usize> {
    (i + 1..ranks.len()).find(|j| ranks[*j] < ranks[i])
}

pub fn subtree_start(ranks: &[u32], i: usize) -> usize {
    (0..i).rev().find(|j| ranks[*j] < ranks[i]).map_or(0, |j| j + 1)
}

impl fmt::Display for RankedSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (s, r)) in self.sets.iter().zip(&self.ranks).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}^{r}")?;
        }
        write!(f, ")")
    }
}

/// A state of the constructed DPA: one ranked slice per component plus an
/// unranked buffer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Macrostate {
    pub comps: Vec<RankedSlice>,
    pub buffer: StateSet,
}

impl Macrostate {
    pub fn empty(n: usize, num_comps: usize) -> Self {
        Macrostate {
            comps: vec![RankedSlice::new(); num_comps],
            buffer: StateSet::empty(n),
        }
    }

    /// All states, ranked or buffered.
    pub fn states(&self) -> StateSet {
        let mut out = self.buffer.clone();
        for c in &self.comps {
            for s in &c.sets {
                out.union_with(s);
            }
        }
        out
    }

    pub fn ranked_states(&self) -> StateSet {
        let mut out = StateSet::empty(self.buffer.capacity());
        for c in &self.comps {
            for s in &c.sets {
                out.union_with(s);
            }
        }
        out
    }

    pub fn num_sets(&self) -> usize {
        self.comps.iter().map(RankedSlice::len).sum()
    }

    pub fn max_rank(&self) -> u32 {
        self.comps
            .iter()
            .flat_map(|c| c.ranks.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty() && self.comps.iter().all(RankedSlice::is_empty)
    }

    /// Compacts ranks to `1..=n`, preserving their global order.
    pub fn normalize(&mut self) {
        let mut all: Vec<u32> = self.comps.iter().flat_map(|c| c.ranks.iter().copied()).collect();
        all.sort_unstable();
        for c in &mut self.comps {
            for r in &mut c.ranks {
                *r = all.binary_search(r).expect("rank present") as u32 + 1;
            }
        }
    }

    /// Checks the structural invariants; `Err` names the first violation.
    pub fn check(&self, ascending: &[bool], single: &[bool]) -> Result<(), String> {
        let mut seen = self.buffer.clone();
        let mut ranks = Vec::new();
        for (ci, c) in self.comps.iter().enumerate() {
            if c.sets.len() != c.ranks.len() {
                return Err(format!("component {ci}: rank/set length mismatch"));
            }
            for s in &c.sets {
                if s.is_empty() {
                    return Err(format!("component {ci}: empty set"));
                }
                if s.intersects(&seen) {
                    return Err(format!("component {ci}: sets overlap"));
                }
                seen.union_with(s);
            }
            if single.get(ci).copied().unwrap_or(false) && c.len() > 1 {
                return Err(format!("component {ci}: breakpoint holds {} sets", c.len()));
            }
            if ascending.get(ci).copied().unwrap_or(false) && c.ranks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("component {ci}: ranks not ascending"));
            }
            ranks.extend(c.ranks.iter().copied());
        }
        ranks.sort_unstable();
        if ranks.iter().enumerate().any(|(i, r)| *r as usize != i + 1) {
            return Err(format!("ranks {ranks:?} are not 1..n"));
        }
        Ok(())
    }
}

impl fmt::Display for Macrostate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.buffer.is_empty() {
            write!(f, " B={}", self.buffer)?;
        }
        Ok(())
    }
}
