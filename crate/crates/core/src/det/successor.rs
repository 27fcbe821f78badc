use crate::analysis::{analyze_sccs, compute_direct_simulation, true_loop_states, SccInfo, SimulationRelation};
use crate::automaton::Nba;
use crate::det::config::DetConfig;
use crate::det::macrostate::{Macrostate, RankedSlice};
use crate::det::ops::{merge, prune, relocate, step, Signals, Work};
use crate::det::policy::{ComponentMode, ComponentPolicy};
use crate::graph::reachable;
use crate::stateset::StateSet;

/// Everything a transition needs besides the source macrostate.
#[derive(Clone, Debug)]
pub struct DetContext {
    pub nba: Nba,
    pub config: DetConfig,
    pub info: SccInfo,
    pub policy: ComponentPolicy,
    pub sim: SimulationRelation,
    pub true_loops: StateSet,
    /// `leave_reach[q]`: states reachable from `q` along a path that leaves
    /// the component domain of `q`.
    leave_reach: Vec<StateSet>,
}

/// Outcome of a transition before interning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// The accepting sink reached through a true-loop state.
    AccSink,
    Macro(Macrostate),
}

/// Intermediate results of one transition, exposed for smart successors.
#[derive(Clone, Debug)]
pub struct Transition {
    pub priority: u32,
    pub k: u32,
    pub signals: Signals,
    /// Normalized Muller-Schupp successor (no merge).
    pub unmerged: Macrostate,
    /// Normalized successor after the merge strategy.
    pub merged: Macrostate,
}

impl DetContext {
    pub fn new(nba: &Nba, config: &DetConfig) -> Self {
        let info = analyze_sccs(nba);
        let policy = ComponentPolicy::build(nba, &info, config);
        let sim = if config.external_inclusion || config.internal_inclusion {
            compute_direct_simulation(nba)
        } else {
            SimulationRelation::identity(nba.num_states())
        };
        let true_loops = if config.true_loop {
            true_loop_states(nba)
        } else {
            StateSet::empty(nba.num_states())
        };
        let leave_reach = if config.internal_inclusion {
            compute_leave_reach(nba, &policy)
        } else {
            Vec::new()
        };
        DetContext {
            nba: nba.clone(),
            config: config.clone(),
            info,
            policy,
            sim,
            true_loops,
            leave_reach,
        }
    }

    pub fn num_states(&self) -> usize {
        self.nba.num_states()
    }

    /// Singleton sets ranked by ascending state index in component order;
    /// a breakpoint component starts with one set.
    pub fn initial_macrostate(&self, init: &StateSet) -> Target {
        if init.intersects(&self.true_loops) {
            return Target::AccSink;
        }
        let n = self.num_states();
        let mut ms = Macrostate::empty(n, self.policy.len());
        let mut rank = 1;
        for (c, dom) in self.policy.domains.iter().enumerate() {
            let here = init.intersection(dom);
            if here.is_empty() {
                continue;
            }
            if self.policy.modes[c] == ComponentMode::Breakpoint {
                ms.comps[c].push(here, rank);
                rank += 1;
            } else {
                for q in &here {
                    ms.comps[c].push(StateSet::singleton(n, q), rank);
                    rank += 1;
                }
            }
        }
        ms.buffer = init.intersection(&self.policy.buffer_rejecting);
        self.language_prune(&mut ms);
        Target::Macro(ms)
    }

    /// Everything up to and including the merge; `None` means the accepting sink.
    pub fn transition(&self, ms: &Macrostate, sym: usize) -> Option<Transition> {
        let nba = &self.nba;
        let mut next_fresh = ms.max_rank() + 1;
        let mut work = step(ms, sym, nba, &self.policy, &mut next_fresh);
        relocate(&mut work, &self.policy, &mut next_fresh);
        if work.states().intersects(&self.true_loops) {
            return None;
        }
        self.prune_work(&mut work);
        let (pruned, signals) = prune(work, &self.policy, nba);
        let (k, priority) = signals.priority(nba.num_states());
        let mut unmerged = pruned.clone();
        unmerged.normalize();
        let mut merged = pruned;
        if !signals.good.is_empty() || !signals.bad.is_empty() {
            merge(&mut merged, k, &signals.good, self.config.merge);
        }
        merged.normalize();
        Some(Transition {
            priority,
            k,
            signals,
            unmerged,
            merged,
        })
    }

    /// Full successor: `(target, priority)`.
    pub fn successor(&self, ms: &Macrostate, sym: usize) -> (Target, u32) {
        match self.transition(ms, sym) {
            None => (Target::AccSink, 0),
            Some(t) => (Target::Macro(t.merged), t.priority),
        }
    }

    /// Ranked states whose language is covered by another ranked state.
    /// `sets` lists every ranked set as `(component, position, set)`.
    fn covered<'a>(&self, sets: impl Iterator<Item = (usize, usize, &'a StateSet)>) -> StateSet {
        let n = self.num_states();
        let ext = self.config.external_inclusion;
        let int = self.config.internal_inclusion;
        let mut pos = vec![(usize::MAX, usize::MAX); n];
        let mut remaining = StateSet::empty(n);
        for (c, i, s) in sets {
            for q in s {
                pos[q] = (c, i);
            }
            remaining.union_with(s);
        }
        let mut removed = StateSet::empty(n);
        if !ext && !int {
            return removed;
        }
        let ranked: Vec<usize> = remaining.iter().collect();
        for &q in &ranked {
            if !remaining.contains(q) {
                continue;
            }
            for &p in &ranked {
                if p == q || !remaining.contains(p) || !self.sim.contains(p, q) {
                    continue;
                }
                let e = ext && self.info.scc_of[p] != self.info.scc_of[q];
                let i = int && pos[q].0 == pos[p].0 && pos[q].1 < pos[p].1 && !self.leave_reach[q].contains(p);
                if e || i {
                    remaining.remove(p);
                    removed.insert(p);
                }
            }
        }
        removed
    }

    /// Language pruning on the intermediate macrostate. Sets it empties are
    /// handled by `prune` like any other emptied set.
    fn prune_work(&self, work: &mut Work) {
        let removed = self.covered(
            work.comps
                .iter()
                .enumerate()
                .flat_map(|(c, es)| es.iter().enumerate().map(move |(i, e)| (c, i, &e.set))),
        );
        if removed.is_empty() {
            return;
        }
        for es in &mut work.comps {
            for e in es {
                e.set.difference_with(&removed);
            }
        }
    }

    /// Language pruning on a complete macrostate: emptied sets are dropped
    /// and ranks renormalized.
    pub fn language_prune(&self, ms: &mut Macrostate) {
        let removed = self.covered(
            ms.comps
                .iter()
                .enumerate()
                .flat_map(|(c, sl)| sl.sets.iter().enumerate().map(move |(i, s)| (c, i, s))),
        );
        if removed.is_empty() {
            return;
        }
        for slice in &mut ms.comps {
            let mut out = RankedSlice::new();
            for (s, r) in slice.sets.iter().zip(&slice.ranks) {
                let kept = s.difference(&removed);
                if !kept.is_empty() {
                    out.push(kept, *r);
                }
            }
            *slice = out;
        }
        ms.normalize();
    }

    /// Structural invariants of a constructed macrostate.
    pub fn check(&self, ms: &Macrostate) -> Result<(), String> {
        ms.check(&self.policy.ascending_flags(), &self.policy.single_set_flags())?;
        for (c, slice) in ms.comps.iter().enumerate() {
            for s in &slice.sets {
                if !s.is_subset(&self.policy.domains[c]) {
                    return Err(format!("component {c} holds foreign states {s}"));
                }
            }
        }
        if !ms.buffer.is_subset(&self.policy.buffer_domain()) {
            return Err(format!("buffer {} outside its domain", ms.buffer));
        }
        Ok(())
    }
}

fn compute_leave_reach(nba: &Nba, policy: &ComponentPolicy) -> Vec<StateSet> {
    let n = nba.num_states();
    let post: Vec<Vec<usize>> = (0..n).map(|p| nba.post_any(p).iter().collect()).collect();
    (0..n)
        .map(|q| {
            let Some(c) = policy.comp_of[q] else {
                return StateSet::empty(n);
            };
            let dom = &policy.domains[c];
            let inside = reachable(n, [q], |v| post[v].iter().copied().filter(|w| dom.contains(*w)).collect::<Vec<_>>());
            let exits = (0..n)
                .filter(|v| inside[*v])
                .flat_map(|v| post[v].iter().copied())
                .filter(|w| !dom.contains(*w));
            let after = reachable(n, exits, |v| post[v].clone());
            StateSet::from_iter_in(n, (0..n).filter(|v| after[*v]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det::config::MergeStrategy;
    use crate::fixtures::{ex_a1, ex_a2, SYM_A, SYM_B};

    fn macro_of(t: Target) -> Macrostate {
        match t {
            Target::Macro(m) => m,
            Target::AccSink => panic!("unexpected sink"),
        }
    }

    #[test]
    fn ex_a1_transitions() {
        let ctx = DetContext::new(&ex_a1(), &DetConfig::default());
        let init = macro_of(ctx.initial_macrostate(ctx.nba.initial()));
        assert_eq!(init.to_string(), "({0}^1)");
        let (s1, p) = ctx.successor(&init, SYM_A);
        let s1 = macro_of(s1);
        assert_eq!((s1.to_string().as_str(), p), ("({1}^2,{0}^1)", 5));
        let (again, p) = ctx.successor(&s1, SYM_A);
        assert_eq!((macro_of(again), p), (s1.clone(), 4));
        let (back, p) = ctx.successor(&s1, SYM_B);
        assert_eq!((macro_of(back), p), (init, 3));
    }

    #[test]
    fn weak_separation_uses_buffer() {
        let cfg = DetConfig::from_opts("W", MergeStrategy::Safra).unwrap();
        let ctx = DetContext::new(&ex_a1(), &cfg);
        let init = macro_of(ctx.initial_macrostate(ctx.nba.initial()));
        assert!(init.comps.iter().all(|c| c.is_empty()));
        assert_eq!(init.buffer.iter().collect::<Vec<_>>(), vec![0]);
        let next = macro_of(ctx.successor(&init, SYM_A).0);
        assert_eq!(next.comps[0].sets, vec![StateSet::singleton(2, 1)]);
        assert_eq!(next.buffer.iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn external_inclusion_drops_simulated_state() {
        let cfg = DetConfig::from_opts("E", MergeStrategy::Safra).unwrap();
        let ctx = DetContext::new(&ex_a2(), &cfg);
        let n = 3;
        let mut ms = Macrostate::empty(n, 1);
        ms.comps[0].push(StateSet::singleton(n, 1), 2);
        ms.comps[0].push(StateSet::singleton(n, 2), 3);
        ms.comps[0].push(StateSet::singleton(n, 0), 1);
        ctx.language_prune(&mut ms);
        assert_eq!(ms.to_string(), "({1}^2,{0}^1)");
    }

    #[test]
    fn internal_inclusion_needs_leftness() {
        let cfg = DetConfig::from_opts("I", MergeStrategy::Safra).unwrap();
        let ctx = DetContext::new(&ex_a2(), &cfg);
        let n = 3;
        let mut ms = Macrostate::empty(n, 1);
        ms.comps[0].push(StateSet::singleton(n, 1), 1);
        ms.comps[0].push(StateSet::singleton(n, 2), 2);
        ctx.language_prune(&mut ms);
        assert_eq!(ms.to_string(), "({1}^1)");

        // 0 is not simulated by 1, and 1 sitting right of 0 is never removed by 0
        let mut ms = Macrostate::empty(n, 1);
        ms.comps[0].push(StateSet::singleton(n, 0), 1);
        ms.comps[0].push(StateSet::singleton(n, 1), 2);
        let before = ms.clone();
        ctx.language_prune(&mut ms);
        assert_eq!(ms, before);
    }

    #[test]
    fn true_loop_reaches_sink() {
        let mut nba = ex_a1();
        nba.add_edge(1, SYM_B, 1);
        let ctx = DetContext::new(&nba, &DetConfig::default());
        let init = macro_of(ctx.initial_macrostate(nba.initial()));
        assert_eq!(ctx.successor(&init, SYM_A), (Target::AccSink, 0));
    }
}
