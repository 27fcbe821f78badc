//! Small reference automata used throughout the tests and the CLI examples.

use crate::automaton::{Alphabet, Nba};

/// Symbol `a` of the two-letter fixture alphabet (proposition `b` false).
pub const SYM_A: usize = 0;
/// Symbol `b` of the two-letter fixture alphabet (proposition `b` true).
pub const SYM_B: usize = 1;

fn ab() -> Alphabet {
    Alphabet::new(vec!["b".into()])
}

/// Words over `{a, b}` with finitely many `b`.
pub fn ex_a1() -> Nba {
    let mut nba = Nba::new(2, ab());
    nba.add_initial(0);
    nba.set_accepting(1, true);
    nba.add_edge(0, SYM_A, 0);
    nba.add_edge(0, SYM_B, 0);
    nba.add_edge(0, SYM_A, 1);
    nba.add_edge(1, SYM_A, 1);
    nba
}

/// `ex_a1` plus a second accepting `a`-looping state that mirrors state 1.
pub fn ex_a2() -> Nba {
    let mut nba = Nba::new(3, ab());
    nba.add_initial(0);
    nba.set_accepting(1, true);
    nba.set_accepting(2, true);
    nba.add_edge(0, SYM_A, 0);
    nba.add_edge(0, SYM_B, 0);
    nba.add_edge(0, SYM_A, 1);
    nba.add_edge(1, SYM_A, 1);
    nba.add_edge(0, SYM_A, 2);
    nba.add_edge(2, SYM_A, 2);
    nba
}
