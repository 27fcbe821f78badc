//! Determinization of Büchi automata into transition-based parity automata
//! with the ranked-slice construction.

pub mod analysis;
pub mod automaton;
pub mod det;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod hoa;
pub mod oracle;
pub mod pipeline;
pub mod postprocess;
pub mod powerset;
pub mod stateset;
pub mod trie;

pub use analysis::{
    analyze_sccs, compute_direct_simulation, trim, true_loop_states, SccInfo, SccKind, SimulationRelation,
};
pub use automaton::{Alphabet, Dpa, Nba, MAX_APS};
pub use det::{determinize_plain, determinize_topo, DetConfig, Limits, MergeStrategy};
pub use error::{Error, Result};
pub use hoa::{emit_dpa, emit_hoa, emit_nba, parse_dpa, parse_hoa, parse_nba, Automaton};
pub use oracle::{bounded_equivalence, dpa_accepts_lasso, dpa_equivalent, nba_accepts_lasso, Lasso, LassoTable};
pub use pipeline::{run, run_size, Run, RunStats, SccBreakdown, Timings};
pub use postprocess::{compress_priorities, minimize_mealy, minimize_priorities, postprocess};
pub use powerset::{build_powerset_structure, PowersetStructure};
pub use stateset::StateSet;
