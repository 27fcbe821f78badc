//! Dense bit-set over the states of a fixed automaton.

use std::fmt;

use smallvec::SmallVec;

type Words = SmallVec<[u64; 2]>;

/// A set of automaton states, stored as a bit-vector sized for a fixed universe.
///
/// Two sets are only comparable when they were created for the same universe
/// size; every set handled by one determinization job satisfies this.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    words: Words,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        let mut words = Words::new();
        words.resize(universe.div_ceil(64), 0);
        StateSet { words }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for q in 0..universe {
            s.insert(q);
        }
        s
    }

    pub fn singleton(universe: usize, q: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(q);
        s
    }

    pub fn from_iter_in(universe: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for q in it {
            s.insert(q);
        }
        s
    }

    /// Number of bits available (rounded up to whole words).
    pub fn capacity(&self) -> usize {
        self.words.len() * 64
    }

    #[inline]
    pub fn insert(&mut self, q: usize) -> bool {
        let (w, b) = (q / 64, q % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, q: usize) -> bool {
        let (w, b) = (q / 64, q % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        let (w, b) = (q / 64, q % 64);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = StateSet::empty(130);
        assert!(a.is_empty());
        a.insert(3);
        a.insert(129);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 129]);
        let b = StateSet::from_iter_in(130, [3, 4]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![129]);
        assert!(StateSet::singleton(130, 3).is_subset(&a));
        assert_eq!(a.len(), 2);
        assert_eq!(StateSet::empty(0).iter().count(), 0);
        assert_eq!(format!("{a}"), "{3,129}");
    }
}
