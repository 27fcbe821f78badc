//! Explicit-alphabet Büchi and parity automata.

use std::fmt::Write as _;

use crate::stateset::StateSet;

/// Maximum number of atomic propositions accepted by the toolkit.
pub const MAX_APS: usize = 8;

/// Alphabet `2^AP`: symbol `s` sets proposition `i` iff bit `i` of `s` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    aps: Vec<String>,
}

impl Alphabet {
    pub fn new(aps: Vec<String>) -> Self {
        assert!(aps.len() <= MAX_APS, "at most {MAX_APS} atomic propositions");
        Alphabet { aps }
    }

    /// Alphabet with `k` propositions named `p0..p{k-1}`.
    pub fn with_aps(k: usize) -> Self {
        Self::new((0..k).map(|i| format!("p{i}")).collect())
    }

    /// Smallest alphabet with at least `letters` symbols.
    pub fn for_letters(letters: usize) -> Self {
        let mut k = 0;
        while (1usize << k) < letters {
            k += 1;
        }
        Self::with_aps(k)
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn len(&self) -> usize {
        1 << self.aps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Renders a symbol as the set of propositions it makes true, e.g. `{a,c}`.
    pub fn render(&self, sym: usize) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for (i, ap) in self.aps.iter().enumerate() {
            if sym >> i & 1 == 1 {
                if !first {
                    out.push(',');
                }
                out.push_str(ap);
                first = false;
            }
        }
        out.push('}');
        out
    }

    pub fn render_word(&self, word: &[usize]) -> String {
        word.iter().map(|s| self.render(*s)).collect()
    }
}

/// Nondeterministic Büchi automaton with state-based acceptance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nba {
    alphabet: Alphabet,
    n: usize,
    succ: Vec<StateSet>,
    initial: StateSet,
    accepting: StateSet,
    names: Vec<Option<String>>,
}

impl Nba {
    pub fn new(n: usize, alphabet: Alphabet) -> Self {
        let syms = alphabet.len();
        Nba {
            n,
            succ: vec![StateSet::empty(n); n * syms],
            initial: StateSet::empty(n),
            accepting: StateSet::empty(n),
            names: vec![None; n],
            alphabet,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn add_edge(&mut self, p: usize, sym: usize, q: usize) {
        let syms = self.num_symbols();
        self.succ[p * syms + sym].insert(q);
    }

    pub fn add_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize, acc: bool) {
        if acc {
            self.accepting.insert(q);
        } else {
            self.accepting.remove(q);
        }
    }

    pub fn set_name(&mut self, q: usize, name: impl Into<String>) {
        self.names[q] = Some(name.into());
    }

    pub fn name(&self, q: usize) -> Option<&str> {
        self.names[q].as_deref()
    }

    #[inline]
    pub fn succ(&self, p: usize, sym: usize) -> &StateSet {
        &self.succ[p * self.num_symbols() + sym]
    }

    /// `Δ(P, a)`.
    pub fn post(&self, set: &StateSet, sym: usize) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for p in set {
            out.union_with(self.succ(p, sym));
        }
        out
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn accepting(&self) -> &StateSet {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(q)
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(StateSet::len).sum()
    }

    /// All successors of `p` over every symbol.
    pub fn post_any(&self, p: usize) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for a in self.alphabet.symbols() {
            out.union_with(self.succ(p, a));
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let syms = self.num_symbols();
        (0..self.n).flat_map(move |p| {
            (0..syms).flat_map(move |a| self.succ(p, a).iter().map(move |q| (p, a, q)))
        })
    }

    /// Restriction to `keep`, renumbering kept states in increasing order.
    pub fn restrict(&self, keep: &StateSet) -> Nba {
        let map: Vec<Option<usize>> = {
            let mut next = 0;
            (0..self.n)
                .map(|q| {
                    keep.contains(q).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let m = keep.len();
        let mut out = Nba::new(m, self.alphabet.clone());
        for (p, a, q) in self.edges() {
            if let (Some(p2), Some(q2)) = (map[p], map[q]) {
                out.add_edge(p2, a, q2);
            }
        }
        for (q, slot) in map.iter().enumerate() {
            if let Some(q2) = *slot {
                if self.initial.contains(q) {
                    out.add_initial(q2);
                }
                out.set_accepting(q2, self.accepting.contains(q));
                out.names[q2] = self.names[q].clone();
            }
        }
        out
    }

    /// Copy with a different initial set.
    pub fn with_initial(&self, init: &StateSet) -> Nba {
        let mut out = self.clone();
        out.initial = init.clone();
        out
    }
}

/// Complete deterministic parity automaton with transition priorities and
/// min-even acceptance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    alphabet: Alphabet,
    n: usize,
    delta: Vec<u32>,
    prio: Vec<u32>,
    initial: usize,
}

impl Dpa {
    /// A DPA whose every transition is an undefined self-loop with priority 0.
    /// Callers must set every transition.
    pub fn new(n: usize, alphabet: Alphabet, initial: usize) -> Self {
        assert!(n > 0 && initial < n);
        let syms = alphabet.len();
        Dpa {
            n,
            delta: (0..n * syms).map(|i| (i / syms) as u32).collect(),
            prio: vec![0; n * syms],
            initial,
            alphabet,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = q;
    }

    pub fn set_edge(&mut self, p: usize, sym: usize, q: usize, priority: u32) {
        let i = p * self.num_symbols() + sym;
        self.delta[i] = q as u32;
        self.prio[i] = priority;
    }

    #[inline]
    pub fn succ(&self, p: usize, sym: usize) -> usize {
        self.delta[p * self.num_symbols() + sym] as usize
    }

    #[inline]
    pub fn priority(&self, p: usize, sym: usize) -> u32 {
        self.prio[p * self.num_symbols() + sym]
    }

    pub fn set_priority(&mut self, p: usize, sym: usize, priority: u32) {
        let i = p * self.num_symbols() + sym;
        self.prio[i] = priority;
    }

    /// Transition index `p * |Σ| + a`.
    pub fn edge_index(&self, p: usize, sym: usize) -> usize {
        p * self.num_symbols() + sym
    }

    pub fn num_edges(&self) -> usize {
        self.delta.len()
    }

    pub fn priorities(&self) -> &[u32] {
        &self.prio
    }

    pub fn set_priorities(&mut self, prio: Vec<u32>) {
        assert_eq!(prio.len(), self.prio.len());
        self.prio = prio;
    }

    pub fn distinct_priorities(&self) -> Vec<u32> {
        let mut v = self.prio.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Keeps states reachable from the initial state, renumbered in BFS order.
    pub fn reachable_part(&self) -> Dpa {
        let syms = self.num_symbols();
        let mut map = vec![usize::MAX; self.n];
        let mut order = vec![self.initial];
        map[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let p = order[i];
            for a in 0..syms {
                let q = self.succ(p, a);
                if map[q] == usize::MAX {
                    map[q] = order.len();
                    order.push(q);
                }
            }
            i += 1;
        }
        let mut out = Dpa::new(order.len(), self.alphabet.clone(), 0);
        for (np, &p) in order.iter().enumerate() {
            for a in 0..syms {
                out.set_edge(np, a, map[self.succ(p, a)], self.priority(p, a));
            }
        }
        out
    }

    /// Same automaton with every priority shifted by one (complement language).
    pub fn complement(&self) -> Dpa {
        let mut out = self.clone();
        out.prio.iter_mut().for_each(|p| *p += 1);
        out
    }

    /// One-line-per-transition dump, used in diagnostics and snapshot tests.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for p in 0..self.n {
            for a in 0..self.num_symbols() {
                let _ = writeln!(s, "{p} -{a}-> {} @{}", self.succ(p, a), self.priority(p, a));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rendering() {
        let al = Alphabet::new(vec!["a".into(), "b".into()]);
        assert_eq!(al.len(), 4);
        assert_eq!(al.render(0), "{}");
        assert_eq!(al.render(3), "{a,b}");
        assert_eq!(Alphabet::for_letters(6).aps().len(), 3);
        assert_eq!(Alphabet::for_letters(1).len(), 1);
    }

    #[test]
    fn restrict_renumbers() {
        let mut nba = Nba::new(3, Alphabet::with_aps(0));
        nba.add_edge(0, 0, 2);
        nba.add_edge(2, 0, 2);
        nba.add_initial(0);
        nba.set_accepting(2, true);
        let keep = StateSet::from_iter_in(3, [0, 2]);
        let r = nba.restrict(&keep);
        assert_eq!(r.num_states(), 2);
        assert!(r.succ(0, 0).contains(1));
        assert!(r.is_accepting(1));
    }
}
