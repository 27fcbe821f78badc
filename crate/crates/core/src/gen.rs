//! Benchmark families and seeded random automata.
//!
//! Families are defined over `L` abstract letters. They are encoded over the
//! smallest `2^AP` alphabet with at least `L` symbols; every valuation `v`
//! reads as letter `min(v, L - 1)`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::analyze_sccs;
use crate::automaton::{Alphabet, Dpa, Nba};

/// Builds an NBA over abstract letters.
struct Letters {
    nba: Nba,
    letters: usize,
}

impl Letters {
    fn new(states: usize, letters: usize) -> Self {
        assert!(letters >= 1, "at least one letter");
        Letters {
            nba: Nba::new(states, Alphabet::for_letters(letters)),
            letters,
        }
    }

    fn edge(&mut self, p: usize, letter: usize, q: usize) {
        for v in self.nba.alphabet().symbols() {
            if v.min(self.letters - 1) == letter {
                self.nba.add_edge(p, v, q);
            }
        }
    }

    fn edge_except(&mut self, p: usize, skip: usize, q: usize) {
        for l in (0..self.letters).filter(|l| *l != skip) {
            self.edge(p, l, q);
        }
    }

    fn edge_all(&mut self, p: usize, q: usize) {
        for l in 0..self.letters {
            self.edge(p, l, q);
        }
    }
}

/// The `B(n)` family: states `q_1..q_n` and an accepting `q_F`, letters
/// `1..n` and a final `#`.
pub fn bn(n: usize) -> Nba {
    assert!(n >= 1);
    let hash = n;
    let fin = n;
    let mut b = Letters::new(n + 1, n + 1);
    for i in 0..n {
        for j in i + 1..n {
            b.edge(i, j, j);
        }
        b.edge_except(i, i, i);
        b.edge(i, i, fin);
        b.nba.set_name(i, format!("q{}", i + 1));
    }
    b.edge_except(fin, hash, fin);
    b.nba.set_name(fin, "qF");
    b.nba.set_accepting(fin, true);
    b.nba.add_initial(0);
    b.nba
}

/// The universal `C(n)` family with `2n + 1` states over letters `1..n`.
pub fn cn(n: usize) -> Nba {
    assert!(n >= 1);
    let mut c = Letters::new(2 * n + 1, n);
    c.nba.set_name(0, "q0");
    for i in 0..n {
        let (q, qp) = (1 + i, 1 + n + i);
        c.edge_all(0, q);
        c.edge_except(q, i, q);
        c.edge(q, i, qp);
        c.edge(qp, i, qp);
        c.edge_all(qp, q);
        c.nba.set_accepting(qp, true);
        c.nba.set_name(q, format!("q{}", i + 1));
        c.nba.set_name(qp, format!("q{}'", i + 1));
    }
    c.nba.add_initial(0);
    c.nba
}

/// Parameters of the random model: for each letter, `round(density * states)`
/// distinct edges drawn uniformly; `round(acc_frac * states)` accepting states
/// (at least one); state 0 initial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub states: usize,
    pub letters: usize,
    pub density: f64,
    pub acc_frac: f64,
}

impl RandomSpec {
    pub fn new(states: usize, letters: usize, density: f64, acc_frac: f64) -> Self {
        RandomSpec {
            states,
            letters,
            density,
            acc_frac,
        }
    }
}

pub fn random(model: &RandomSpec, seed: u64) -> Nba {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_with(model, &mut rng)
}

fn random_with(model: &RandomSpec, rng: &mut ChaCha8Rng) -> Nba {
    let n = model.states.max(1);
    let mut b = Letters::new(n, model.letters.max(1));
    let per_letter = ((model.density * n as f64).round() as usize).min(n * n);
    for l in 0..b.letters {
        for e in sample(rng, n * n, per_letter) {
            b.edge(e / n, l, e % n);
        }
    }
    let acc = ((model.acc_frac * n as f64).round() as usize).clamp(1, n);
    for q in sample(rng, n, acc) {
        b.nba.set_accepting(q, true);
    }
    b.nba.add_initial(0);
    b.nba
}

/// A random automaton made weak: each SCC becomes wholly accepting when it
/// drew an accepting state and wholly non-accepting otherwise.
pub fn random_weak(model: &RandomSpec, seed: u64) -> Nba {
    let mut nba = random(model, seed);
    let info = analyze_sccs(&nba);
    for members in &info.members {
        let acc = members.intersects(nba.accepting());
        for q in members.iter() {
            nba.set_accepting(q, acc);
        }
    }
    nba
}

/// `count` random automata with state counts drawn from `min_states..=max_states`.
pub fn random_suite(
    count: usize,
    min_states: usize,
    max_states: usize,
    letters: usize,
    density: f64,
    acc_frac: f64,
    seed: u64,
) -> Vec<Nba> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let states = rng.gen_range(min_states..=max_states);
            random_with(&RandomSpec::new(states, letters, density, acc_frac), &mut rng)
        })
        .collect()
}

/// A complete DPA with uniformly drawn successors and priorities in `lo..=hi`.
pub fn random_dpa(states: usize, aps: usize, lo: u32, hi: u32, seed: u64) -> Dpa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = states.max(1);
    let mut d = Dpa::new(n, Alphabet::with_aps(aps), 0);
    for p in 0..n {
        for a in d.alphabet().symbols() {
            let q = rng.gen_range(0..n);
            let pr = rng.gen_range(lo..=hi);
            d.set_edge(p, a, q, pr);
        }
    }
    d
}
