//! The full run: trim, determinize, optionally minimize.

use std::time::{Duration, Instant};

use crate::analysis::{analyze_sccs, trim, SccKind};
use crate::automaton::{Dpa, Nba};
use crate::det::{determinize_plain, determinize_topo, DetConfig, Limits};
use crate::error::Result;
use crate::postprocess::postprocess;

/// SCC counts by kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SccBreakdown {
    pub trivial: usize,
    pub rejecting: usize,
    pub accepting: usize,
    pub mixed: usize,
}

impl SccBreakdown {
    pub fn of(nba: &Nba) -> Self {
        let mut b = SccBreakdown::default();
        for k in analyze_sccs(nba).kind {
            match k {
                SccKind::Trivial => b.trivial += 1,
                SccKind::Rejecting => b.rejecting += 1,
                SccKind::Accepting => b.accepting += 1,
                SccKind::Mixed => b.mixed += 1,
            }
        }
        b
    }
}

/// Wall-clock time per pass.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub trim: Duration,
    pub determinize: Duration,
    pub postprocess: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.trim + self.determinize + self.postprocess
    }
}

#[derive(Clone, Debug)]
pub struct RunStats {
    pub input_states: usize,
    pub trimmed_states: usize,
    pub sccs: SccBreakdown,
    /// States of the determinized automaton before minimization.
    pub det_states: usize,
    pub output_states: usize,
    pub priorities: usize,
    pub timings: Timings,
    pub config: DetConfig,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub dpa: Dpa,
    pub stats: RunStats,
}

pub fn run(nba: &Nba, config: &DetConfig, limits: &Limits) -> Result<Run> {
    let t0 = Instant::now();
    let trimmed = trim(nba);
    let t1 = Instant::now();
    let det = if config.topological {
        determinize_topo(&trimmed, config, limits)?.dpa
    } else {
        determinize_plain(&trimmed, config, limits)?.dpa
    };
    let t2 = Instant::now();
    let det_states = det.num_states();
    let dpa = if config.minimize { postprocess(&det) } else { det };
    let t3 = Instant::now();
    let stats = RunStats {
        input_states: nba.num_states(),
        trimmed_states: trimmed.num_states(),
        sccs: SccBreakdown::of(&trimmed),
        det_states,
        output_states: dpa.num_states(),
        priorities: dpa.distinct_priorities().len(),
        timings: Timings {
            trim: t1 - t0,
            determinize: t2 - t1,
            postprocess: t3 - t2,
        },
        config: config.clone(),
    };
    Ok(Run { dpa, stats })
}

/// Number of states produced by `run`.
pub fn run_size(nba: &Nba, config: &DetConfig, limits: &Limits) -> Result<usize> {
    run(nba, config, limits).map(|r| r.dpa.num_states())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex_a1;
    use crate::gen::cn;

    #[test]
    fn fixture_run() {
        let r = run(&ex_a1(), &DetConfig::default(), &Limits::default()).unwrap();
        assert_eq!(r.stats.output_states, 2);
        assert_eq!(r.stats.priorities, 3);
        assert_eq!(r.stats.sccs.rejecting + r.stats.sccs.accepting, 2);
        let m = DetConfig::from_opts("M", crate::det::MergeStrategy::Safra).unwrap();
        let r = run(&ex_a1(), &m, &Limits::default()).unwrap();
        assert_eq!(r.dpa.distinct_priorities(), vec![1, 2]);
    }

    #[test]
    fn universal_family_minimizes_to_one_state() {
        let m = DetConfig::from_opts("M", crate::det::MergeStrategy::Safra).unwrap();
        assert_eq!(run_size(&cn(2), &m, &Limits::default()).unwrap(), 1);
    }
}
